#pragma once

#include <algorithm>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "tec/document.hpp"
#include "tec/embedding_store.hpp"
#include "tec/inference.hpp"
#include "tec/kmeans.hpp"
#include "tec/linalg.hpp"
#include "tec/log.hpp"
#include "tec/types.hpp"

namespace tec {

struct RerankConfig {
    int n = 10;                 // entities reported per topic
    double epsilon = 1e-6;      // seed weight scale
    int n_track = 0;            // per-topic score-table cap; 0 = 10 * n
    bool flat_epsilon = false;  // seed with plain epsilon instead of epsilon / (1 + d^2)
};

using ScoredEntity = std::pair<EntityId, double>;

// Scores normalized to sum 1, sorted by score desc then id asc.
inline std::vector<ScoredEntity> relative_frequency(const std::map<EntityId, double>& scores) {
    if (scores.empty()) fail("relative_frequency requires at least one score");
    double total = 0.0;
    for (const auto& [id, value] : scores) {
        if (!(value >= 0.0)) fail("negative score for entity ", id);
        total += value;
    }
    if (total <= 0.0) fail("cannot normalize all-zero scores");
    std::vector<ScoredEntity> out(scores.begin(), scores.end());
    for (auto& [id, value] : out) value /= total;
    std::stable_sort(out.begin(), out.end(), [](const ScoredEntity& a, const ScoredEntity& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return out;
}

// The n entities nearest to v, seeded with weight epsilon / (1 + d^2)
// (or a flat epsilon), so seeds rank by proximity before any document votes.
inline std::vector<ScoredEntity> closest_entities(std::span<const double> v,
                                                  const EmbeddingStore& store, int n,
                                                  double epsilon, bool flat_epsilon = false) {
    if (n < 1) fail("closest_entities requires n >= 1, got ", n);
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) fail("epsilon must be finite and > 0");
    if (static_cast<int>(v.size()) != store.dim()) {
        fail("vector dimension ", v.size(), " does not match store dimension ", store.dim());
    }
    std::vector<std::pair<double, EntityId>> by_distance;
    by_distance.reserve(store.size());
    for (const auto& [id, e] : store.vectors()) {
        by_distance.emplace_back(squared_distance(v, e), id);
    }
    std::sort(by_distance.begin(), by_distance.end());  // (d^2 asc, id asc)
    const std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(n), by_distance.size());
    if (keep < static_cast<std::size_t>(n)) {
        log_warn("requested ", n, " closest entities but store only has ", by_distance.size());
    }
    std::vector<ScoredEntity> out;
    out.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) {
        const double score = flat_epsilon ? epsilon : epsilon / (1.0 + by_distance[i].first);
        out.emplace_back(by_distance[i].second, score);
    }
    return out;
}

namespace detail {

// Per-topic score table with a size cap. At capacity a new entity only
// enters by beating the current minimum, which it evicts (ties evict the
// lexicographically largest id).
class BoundedScores {
  public:
    explicit BoundedScores(std::size_t cap) : cap_(cap) {}

    void add(const EntityId& id, double value) {
        auto it = scores_.find(id);
        if (it != scores_.end()) {
            it->second += value;
            return;
        }
        if (scores_.size() < cap_) {
            scores_.emplace(id, value);
            return;
        }
        auto weakest = scores_.begin();
        for (auto cur = scores_.begin(); cur != scores_.end(); ++cur) {
            if (cur->second <= weakest->second) weakest = cur;  // later id wins ties
        }
        if (value > weakest->second) {
            scores_.erase(weakest);
            scores_.emplace(id, value);
        }
    }

    const std::map<EntityId, double>& get() const { return scores_; }

  private:
    std::size_t cap_;
    std::map<EntityId, double> scores_;
};

}  // namespace detail

// Document-frequency reranking. Each topic's table starts from its closest
// entities; every document then adds max(w) * tf(e) to its argmax topic's
// table for each of its entities. Tables are cut to the top n and normalized.
inline std::vector<std::vector<ScoredEntity>> rerank(const std::vector<EntityDocument>& corpus,
                                                     const EmbeddingStore& store,
                                                     const Centroids& centroids,
                                                     const RerankConfig& config = {}) {
    if (config.n < 1) fail("rerank requires n >= 1, got ", config.n);
    if (config.n_track != 0 && config.n_track < config.n) {
        fail("n_track must be 0 (auto) or >= n, got ", config.n_track);
    }
    const std::size_t cap = config.n_track == 0 ? static_cast<std::size_t>(config.n) * 10
                                                : static_cast<std::size_t>(config.n_track);

    std::vector<detail::BoundedScores> tables;
    tables.reserve(static_cast<std::size_t>(centroids.k));
    for (int t = 0; t < centroids.k; ++t) {
        tables.emplace_back(cap);
        for (const auto& [id, score] :
             closest_entities(centroids.row(t), store, config.n, config.epsilon,
                              config.flat_epsilon)) {
            tables.back().add(id, score);
        }
    }

    if (corpus.empty()) {
        log_warn("empty corpus: topics keep their proximity-seeded ranking");
    }
    for (const auto& doc : corpus) {
        if (doc.empty()) {
            log_warn("skipping empty document in rerank: ", doc.doc_id);
            continue;
        }
        const std::vector<double> w = infer(doc, store, centroids);
        int top = 0;
        for (int t = 1; t < centroids.k; ++t) {
            if (w[static_cast<std::size_t>(t)] > w[static_cast<std::size_t>(top)]) top = t;
        }
        const double top_w = w[static_cast<std::size_t>(top)];
        for (const auto& [id, count] : doc.tf) {
            tables[static_cast<std::size_t>(top)].add(id, top_w * static_cast<double>(count));
        }
    }

    std::vector<std::vector<ScoredEntity>> topics;
    topics.reserve(tables.size());
    for (const auto& table : tables) {
        std::vector<ScoredEntity> ranked = relative_frequency(table.get());
        if (ranked.size() > static_cast<std::size_t>(config.n)) {
            ranked.resize(static_cast<std::size_t>(config.n));
        }
        double kept = 0.0;
        for (const auto& [id, score] : ranked) kept += score;
        for (auto& [id, score] : ranked) score /= kept;  // kept set sums to 1
        topics.push_back(std::move(ranked));
    }
    return topics;
}

}  // namespace tec
