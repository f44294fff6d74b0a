#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "tec/document.hpp"
#include "tec/log.hpp"
#include "tec/rerank.hpp"
#include "tec/types.hpp"

namespace tec {

// Document-level presence counts: how many documents contain an entity, and
// how many contain both members of an unordered pair.
struct CooccurrenceStats {
    std::size_t documents = 0;
    std::map<EntityId, std::size_t> df;
    std::map<std::pair<EntityId, EntityId>, std::size_t> joint;

    std::size_t doc_frequency(const EntityId& id) const {
        auto it = df.find(id);
        return it == df.end() ? 0 : it->second;
    }

    std::size_t joint_frequency(const EntityId& a, const EntityId& b) const {
        if (a == b) return doc_frequency(a);
        auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
        auto it = joint.find(key);
        return it == joint.end() ? 0 : it->second;
    }
};

inline CooccurrenceStats build_stats(const std::vector<EntityDocument>& corpus) {
    CooccurrenceStats stats;
    for (const auto& doc : corpus) {
        if (doc.empty()) {
            log_warn("skipping empty document in co-occurrence stats: ", doc.doc_id);
            continue;
        }
        ++stats.documents;
        std::vector<EntityId> present;
        present.reserve(doc.tf.size());
        for (const auto& [id, count] : doc.tf) {
            present.push_back(id);
            ++stats.df[id];
        }
        for (std::size_t i = 0; i < present.size(); ++i) {
            for (std::size_t j = i + 1; j < present.size(); ++j) {
                ++stats.joint[{present[i], present[j]}];
            }
        }
    }
    if (stats.documents == 0) fail("co-occurrence stats require at least one non-empty document");
    return stats;
}

// Normalized PMI in [-1, 1]. Never-co-occurring pairs pin to -1; pairs whose
// joint probability equals both marginals pin to +1 (covers the 0/0 case of
// entities present in every document).
inline double npmi(const CooccurrenceStats& stats, const EntityId& a, const EntityId& b) {
    const std::size_t df_a = stats.doc_frequency(a);
    const std::size_t df_b = stats.doc_frequency(b);
    if (df_a == 0) fail("entity not in co-occurrence stats: ", a);
    if (df_b == 0) fail("entity not in co-occurrence stats: ", b);
    const std::size_t joint = stats.joint_frequency(a, b);
    if (joint == 0) return -1.0;
    const double d = static_cast<double>(stats.documents);
    const double p_ij = static_cast<double>(joint) / d;
    const double p_a = static_cast<double>(df_a) / d;
    const double p_b = static_cast<double>(df_b) / d;
    if (p_ij == p_a && p_ij == p_b) return 1.0;
    return std::log(p_ij / (p_a * p_b)) / -std::log(p_ij);
}

// Mean pairwise NPMI over a topic's top entities. Entities absent from the
// corpus are unscoreable and dropped; fewer than two scoreable -> 0.
inline double topic_coherence(const CooccurrenceStats& stats,
                              const std::vector<ScoredEntity>& topic, int n_top = 10) {
    if (n_top < 2) fail("coherence requires n_top >= 2, got ", n_top);
    std::vector<EntityId> ids;
    for (const auto& [id, score] : topic) {
        if (static_cast<int>(ids.size()) == n_top) break;
        if (stats.doc_frequency(id) == 0) {
            log_warn("entity not in evaluation corpus, skipped for coherence: ", id);
            continue;
        }
        ids.push_back(id);
    }
    if (ids.size() < 2) {
        log_warn("fewer than two scoreable entities in topic; coherence set to 0");
        return 0.0;
    }
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            total += npmi(stats, ids[i], ids[j]);
            ++pairs;
        }
    }
    return total / static_cast<double>(pairs);
}

// Fraction of unique entities across each topic's top slots.
inline double topic_diversity(const std::vector<std::vector<ScoredEntity>>& topics,
                              int top = 25) {
    if (top < 1) fail("diversity requires top >= 1, got ", top);
    if (topics.empty()) fail("diversity requires at least one topic");
    std::set<EntityId> unique;
    std::size_t slots = 0;
    for (const auto& topic : topics) {
        const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(top), topic.size());
        for (std::size_t i = 0; i < take; ++i) unique.insert(topic[i].first);
        slots += take;
    }
    if (slots == 0) fail("diversity requires non-empty topics");
    return static_cast<double>(unique.size()) / static_cast<double>(slots);
}

struct EvalReport {
    double tc = 0.0;  // mean per-topic coherence
    double td = 0.0;  // diversity over top slots
    double tq = 0.0;  // tc * td
    std::vector<double> per_topic_tc;
    int n_coherence = 10;
    int top_diversity = 25;
};

inline EvalReport evaluate(const CooccurrenceStats& stats,
                           const std::vector<std::vector<ScoredEntity>>& topics,
                           int n_coherence = 10, int top_diversity = 25) {
    if (topics.empty()) fail("evaluation requires at least one topic");
    EvalReport report;
    report.n_coherence = n_coherence;
    report.top_diversity = top_diversity;
    for (const auto& topic : topics) {
        report.per_topic_tc.push_back(topic_coherence(stats, topic, n_coherence));
    }
    double total = 0.0;
    for (double tc : report.per_topic_tc) total += tc;
    report.tc = total / static_cast<double>(report.per_topic_tc.size());
    report.td = topic_diversity(topics, top_diversity);
    report.tq = report.tc * report.td;
    return report;
}

}  // namespace tec
