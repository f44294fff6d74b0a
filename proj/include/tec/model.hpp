#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tec/embedding_store.hpp"
#include "tec/fusion.hpp"
#include "tec/kmeans.hpp"
#include "tec/rerank.hpp"
#include "tec/types.hpp"

namespace tec {

struct TopicModel {
    FusionConfig fusion;
    KMeansConfig kmeans;
    RerankConfig rerank;
    Centroids centroids;
    std::vector<std::vector<ScoredEntity>> topics;
    std::string vocab_hash;
    std::string created_at;
};

// FNV-1a 64 over the sorted entity ids, newline-terminated each, so any
// vocabulary change flips the hash.
inline std::string vocab_hash_of(const std::set<EntityId>& ids) {
    std::uint64_t h = 14695981039346656037ULL;
    auto mix = [&h](unsigned char byte) {
        h ^= static_cast<std::uint64_t>(byte);
        h *= 1099511628211ULL;
    };
    for (const EntityId& id : ids) {
        for (char c : id) mix(static_cast<unsigned char>(c));
        mix('\n');
    }
    std::ostringstream out;
    out << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

inline std::string vocab_hash_of(const EmbeddingStore& store) {
    std::set<EntityId> ids;
    for (const auto& [id, v] : store.vectors()) ids.insert(id);
    return vocab_hash_of(ids);
}

// Honors SOURCE_DATE_EPOCH; otherwise a fixed instant, so identical inputs
// produce byte-identical model files.
inline std::string model_timestamp() {
    const char* env = std::getenv("SOURCE_DATE_EPOCH");
    if (env == nullptr || *env == '\0') return "1970-01-01T00:00:00Z";
    char* end = nullptr;
    const long long secs = std::strtoll(env, &end, 10);
    if (end == nullptr || *end != '\0') fail("invalid SOURCE_DATE_EPOCH: ", env);
    std::time_t t = static_cast<std::time_t>(secs);
    std::tm tm{};
    if (gmtime_r(&t, &tm) == nullptr) fail("SOURCE_DATE_EPOCH out of range: ", env);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline nlohmann::json model_to_json(const TopicModel& model) {
    nlohmann::json j;
    j["version"] = 1;
    j["created_at"] = model.created_at;

    nlohmann::json fusion;
    if (model.fusion.alpha == kAlphaInfinity) {
        fusion["alpha"] = "inf";
    } else {
        fusion["alpha"] = model.fusion.alpha;
    }
    fusion["dim_lm"] = model.fusion.dim_lm;
    fusion["dim_graph"] = model.fusion.dim_graph;
    j["fusion"] = fusion;

    nlohmann::json kmeans;
    kmeans["k"] = model.centroids.k;
    kmeans["seed"] = model.kmeans.seed;
    kmeans["max_iters"] = model.kmeans.max_iters;
    kmeans["tol"] = model.kmeans.tol;
    kmeans["n_redo"] = model.kmeans.n_redo;
    kmeans["iterations_run"] = model.centroids.iterations_run;
    kmeans["inertia"] = model.centroids.inertia;
    j["kmeans"] = kmeans;

    nlohmann::json rerank;
    rerank["n"] = model.rerank.n;
    rerank["epsilon"] = model.rerank.epsilon;
    rerank["n_track"] = model.rerank.n_track;
    rerank["flat_epsilon"] = model.rerank.flat_epsilon;
    j["rerank"] = rerank;

    nlohmann::json centroids = nlohmann::json::array();
    for (int t = 0; t < model.centroids.k; ++t) {
        const auto row = model.centroids.row(t);
        centroids.push_back(std::vector<double>(row.begin(), row.end()));
    }
    j["centroids"] = centroids;

    nlohmann::json topics = nlohmann::json::array();
    for (std::size_t t = 0; t < model.topics.size(); ++t) {
        nlohmann::json entry;
        entry["topic"] = t;
        nlohmann::json entities = nlohmann::json::array();
        for (const auto& [id, score] : model.topics[t]) {
            entities.push_back(nlohmann::json::array({id, score}));
        }
        entry["entities"] = entities;
        topics.push_back(entry);
    }
    j["topics"] = topics;

    j["vocab_hash"] = model.vocab_hash;
    return j;
}

inline TopicModel model_from_json(const nlohmann::json& j, const std::string& where) {
    TopicModel model;
    try {
        const int version = j.at("version").get<int>();
        if (version != 1) fail("unsupported model version ", version, " in ", where);
        model.created_at = j.at("created_at").get<std::string>();

        const auto& fusion = j.at("fusion");
        const auto& alpha = fusion.at("alpha");
        if (alpha.is_string()) {
            model.fusion.alpha = parse_alpha(alpha.get<std::string>());
        } else {
            model.fusion.alpha = alpha.get<double>();
            validate_alpha(model.fusion.alpha);
        }
        model.fusion.dim_lm = fusion.at("dim_lm").get<int>();
        model.fusion.dim_graph = fusion.at("dim_graph").get<int>();

        const auto& kmeans = j.at("kmeans");
        const int k = kmeans.at("k").get<int>();
        if (k < 1) fail("model k must be >= 1, got ", k, " in ", where);
        model.kmeans.seed = kmeans.at("seed").get<std::uint64_t>();
        model.kmeans.max_iters = kmeans.at("max_iters").get<int>();
        model.kmeans.tol = kmeans.at("tol").get<double>();
        model.kmeans.n_redo = kmeans.at("n_redo").get<int>();
        model.centroids.iterations_run = kmeans.at("iterations_run").get<int>();
        model.centroids.inertia = kmeans.at("inertia").get<double>();

        const auto& rerank = j.at("rerank");
        model.rerank.n = rerank.at("n").get<int>();
        model.rerank.epsilon = rerank.at("epsilon").get<double>();
        model.rerank.n_track = rerank.at("n_track").get<int>();
        model.rerank.flat_epsilon = rerank.at("flat_epsilon").get<bool>();

        const auto& centroids = j.at("centroids");
        if (static_cast<int>(centroids.size()) != k) {
            fail("inconsistent K in ", where, ": ", centroids.size(), " centroids but k = ", k);
        }
        model.centroids.k = k;
        model.centroids.seed = model.kmeans.seed;
        const int dim = model.fusion.dim_lm + model.fusion.dim_graph;
        model.centroids.dim = dim;
        for (const auto& row : centroids) {
            if (static_cast<int>(row.size()) != dim) {
                fail("centroid dimension ", row.size(), " does not match dim_lm + dim_graph = ",
                     dim, " in ", where);
            }
            for (const auto& x : row) model.centroids.data.push_back(x.get<double>());
        }

        const auto& topics = j.at("topics");
        if (static_cast<int>(topics.size()) != k) {
            fail("inconsistent K in ", where, ": ", topics.size(), " topics but k = ", k);
        }
        model.topics.resize(static_cast<std::size_t>(k));
        for (const auto& entry : topics) {
            const int t = entry.at("topic").get<int>();
            if (t < 0 || t >= k) fail("topic index ", t, " out of range in ", where);
            auto& list = model.topics[static_cast<std::size_t>(t)];
            for (const auto& pair : entry.at("entities")) {
                if (!pair.is_array() || pair.size() != 2) {
                    fail("malformed topic entity entry in ", where);
                }
                list.emplace_back(pair[0].get<std::string>(), pair[1].get<double>());
            }
        }

        model.vocab_hash = j.at("vocab_hash").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        fail("invalid model file ", where, ": ", e.what());
    }
    return model;
}

// Write-then-rename so readers never observe a half-written model.
inline void save_model(const TopicModel& model, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail("cannot open for writing: ", tmp);
        out << model_to_json(model).dump(2) << '\n';
        if (!out.good()) fail("write failed: ", tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        fail("cannot rename ", tmp, " to ", path);
    }
}

inline TopicModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open model file: ", path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        fail("invalid model file ", path, ": ", e.what());
    }
    return model_from_json(j, path);
}

}  // namespace tec
