#pragma once

#include <atomic>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tec/corpus_io.hpp"
#include "tec/entitizer.hpp"
#include "tec/fusion.hpp"
#include "tec/inference.hpp"
#include "tec/kmeans.hpp"
#include "tec/lexicon.hpp"
#include "tec/log.hpp"
#include "tec/metrics.hpp"
#include "tec/model.hpp"
#include "tec/rerank.hpp"
#include "tec/types.hpp"

namespace tec {

struct FuseResult {
    FusionConfig config;
    std::size_t entities = 0;
};

// Fuse two embedding files and write the result, with the fusion settings
// recorded as header comments for provenance.
inline FuseResult run_fuse(const std::string& lm_path, const std::string& graph_path,
                           double alpha, const std::string& out_path) {
    const EmbeddingStore lm = load_embeddings(lm_path, Source::LM);
    const EmbeddingStore graph = load_embeddings(graph_path, Source::Graph);
    const EmbeddingStore fused = fuse_store(lm, graph, alpha);
    fused.save(out_path, {detail::concat("alpha ", alpha_to_string(alpha)),
                          detail::concat("dim_lm ", lm.dim()),
                          detail::concat("dim_graph ", graph.dim())});
    log_info("fused ", fused.size(), " entities into ", out_path);
    return {FusionConfig{alpha, lm.dim(), graph.dim()}, fused.size()};
}

struct ExtractOptions {
    std::string lang = "en";
    double threshold = 0.3;
    int jobs = 1;  // 0 = hardware concurrency
};

struct ExtractResult {
    std::size_t documents_written = 0;
    std::size_t documents_skipped = 0;  // other-language documents
    std::size_t empty_documents = 0;
};

inline ExtractResult run_extract(const std::string& corpus_path, const std::string& lexicon_path,
                                 const std::string& embeddings_path,
                                 const ExtractOptions& options, const std::string& out_path) {
    const std::vector<RawDocument> raw = load_raw_corpus(corpus_path);
    const Lexicon lexicon = load_lexicon(lexicon_path);
    const EmbeddingStore store = load_embeddings(embeddings_path, Source::Fused);

    // Keep only entries of the requested language whose entity the store can
    // represent; the entitizer requires a closed vocabulary.
    Lexicon usable;
    for (const auto& entry : lexicon.entries()) {
        if (entry.language != options.lang) continue;
        if (!store.contains(entry.entity_id)) {
            log_warn("lexicon entity missing from embedding store, dropped: ", entry.entity_id);
            continue;
        }
        usable.add(entry);
    }
    if (usable.empty()) fail("no usable lexicon entries for language: ", options.lang);

    const Automaton automaton = build_automaton(usable, options.lang);
    const Entitizer entitizer(automaton, store, EntitizerOptions{options.threshold});

    std::vector<EntitizedRecord> records(raw.size());
    std::vector<char> keep(raw.size(), 0);
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= raw.size()) return;
            try {
                const RawDocument& doc = raw[i];
                if (doc.lang != options.lang) {
                    log_warn("skipping document ", doc.id, ": language ", doc.lang,
                             " does not match --lang ", options.lang);
                    continue;
                }
                EntityDocument out = entitizer.entitize(doc.id, doc.text);
                if (out.empty()) {
                    log_warn("no entities extracted from document: ", doc.id);
                }
                records[i] = EntitizedRecord{doc.lang, std::move(out)};
                keep[i] = 1;
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    int jobs = options.jobs;
    if (jobs < 0) fail("--jobs must be >= 0, got ", jobs);
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(jobs));
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    ExtractResult result;
    std::vector<EntitizedRecord> ordered;
    ordered.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (!keep[i]) {
            ++result.documents_skipped;
            continue;
        }
        if (records[i].doc.empty()) ++result.empty_documents;
        ordered.push_back(std::move(records[i]));
    }
    if (ordered.empty()) fail("no documents of language ", options.lang, " in ", corpus_path);
    save_entitized_corpus(ordered, out_path);
    result.documents_written = ordered.size();
    log_info("entitized ", result.documents_written, " documents into ", out_path);
    return result;
}

struct TrainOptions {
    int k = 8;
    double alpha = 1.0;
    KMeansConfig kmeans;
    RerankConfig rerank;
};

// Fuse, cluster, rerank, persist: the whole training stage. All inputs are
// validated before the model file is touched.
inline TopicModel run_train(const std::string& corpus_path, const std::string& lm_path,
                            const std::string& graph_path, const TrainOptions& options,
                            const std::string& out_path) {
    if (options.k < 1) fail("number of topics must be >= 1, got ", options.k);
    validate_alpha(options.alpha);

    const std::vector<EntityDocument> corpus = load_entitized_corpus(corpus_path);
    const EmbeddingStore lm = load_embeddings(lm_path, Source::LM);
    const EmbeddingStore graph = load_embeddings(graph_path, Source::Graph);
    const EmbeddingStore fused = fuse_store(lm, graph, options.alpha);

    if (static_cast<std::size_t>(options.k) > fused.size()) {
        fail("K > vocabulary: requested ", options.k, " topics from ", fused.size(), " entities");
    }
    for (const auto& doc : corpus) {
        for (const auto& [id, count] : doc.tf) {
            if (!fused.contains(id)) {
                fail("corpus entity missing from fused vocabulary: ", id, " (document ",
                     doc.doc_id, ")");
            }
        }
    }

    TopicModel model;
    model.fusion = FusionConfig{options.alpha, lm.dim(), graph.dim()};
    model.kmeans = options.kmeans;
    model.rerank = options.rerank;
    model.centroids = train_kmeans(fused, options.k, options.kmeans);
    model.topics = rerank(corpus, fused, model.centroids, options.rerank);
    model.vocab_hash = vocab_hash_of(fused);
    model.created_at = model_timestamp();
    save_model(model, out_path);
    log_info("trained ", options.k, " topics (inertia ", model.centroids.inertia, ") into ",
             out_path);
    return model;
}

// Re-fuses with the model's own alpha, then refuses to run if the resulting
// vocabulary differs from the one the model was trained on.
inline EmbeddingStore load_model_space(const TopicModel& model, const std::string& lm_path,
                                       const std::string& graph_path) {
    const EmbeddingStore lm = load_embeddings(lm_path, Source::LM);
    const EmbeddingStore graph = load_embeddings(graph_path, Source::Graph);
    if (lm.dim() != model.fusion.dim_lm || graph.dim() != model.fusion.dim_graph) {
        fail("embedding dimensions (", lm.dim(), ", ", graph.dim(),
             ") do not match the model (", model.fusion.dim_lm, ", ", model.fusion.dim_graph, ")");
    }
    EmbeddingStore fused = fuse_store(lm, graph, model.fusion.alpha);
    if (vocab_hash_of(fused) != model.vocab_hash) {
        fail("vocabulary hash mismatch: embeddings do not match the model");
    }
    return fused;
}

inline std::vector<std::pair<std::string, std::vector<double>>> run_infer(
    const std::string& model_path, const std::string& lm_path, const std::string& graph_path,
    const std::string& corpus_path, const std::string& out_path) {
    const TopicModel model = load_model(model_path);
    const EmbeddingStore fused = load_model_space(model, lm_path, graph_path);
    const std::vector<EntityDocument> corpus = load_entitized_corpus(corpus_path);

    std::vector<std::pair<std::string, std::vector<double>>> rows;
    rows.reserve(corpus.size());
    for (const auto& doc : corpus) {
        if (doc.empty()) {
            log_warn("skipping empty document at inference: ", doc.doc_id);
            continue;
        }
        rows.emplace_back(doc.doc_id, infer(doc, fused, model.centroids));
    }
    if (rows.empty()) fail("no non-empty documents to infer in ", corpus_path);
    save_weights(rows, out_path);
    log_info("wrote topic weights for ", rows.size(), " documents into ", out_path);
    return rows;
}

// One block per topic: a `topic <t>` header, then up to `top` entity lines.
inline std::string format_topics(const TopicModel& model, int top) {
    if (top < 1) fail("--top must be >= 1, got ", top);
    std::ostringstream out;
    out << std::fixed << std::setprecision(6);
    for (std::size_t t = 0; t < model.topics.size(); ++t) {
        out << "topic " << t << '\n';
        const auto& entities = model.topics[t];
        const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(top),
                                                       entities.size());
        for (std::size_t i = 0; i < take; ++i) {
            out << "  " << entities[i].first << ' ' << entities[i].second << '\n';
        }
    }
    return out.str();
}

inline std::string run_topics(const std::string& model_path, int top) {
    return format_topics(load_model(model_path), top);
}

inline nlohmann::json eval_report_to_json(const EvalReport& report) {
    nlohmann::json j;
    j["tc"] = report.tc;
    j["td"] = report.td;
    j["tq"] = report.tq;
    j["per_topic_tc"] = report.per_topic_tc;
    j["n"] = report.n_coherence;
    j["top_diversity"] = report.top_diversity;
    return j;
}

inline EvalReport run_eval(const std::string& model_path, const std::string& corpus_path,
                           int n_coherence, int top_diversity, const std::string& out_path) {
    const TopicModel model = load_model(model_path);
    const std::vector<EntityDocument> corpus = load_entitized_corpus(corpus_path);
    const CooccurrenceStats stats = build_stats(corpus);
    const EvalReport report = evaluate(stats, model.topics, n_coherence, top_diversity);
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
        if (!out) fail("cannot open for writing: ", out_path);
        out << eval_report_to_json(report).dump(2) << '\n';
        if (!out.good()) fail("write failed: ", out_path);
    }
    return report;
}

}  // namespace tec
