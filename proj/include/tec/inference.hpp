#pragma once

#include <cmath>
#include <vector>

#include "tec/document.hpp"
#include "tec/embedding_store.hpp"
#include "tec/kmeans.hpp"
#include "tec/types.hpp"

namespace tec {

// Frequency-weighted mean of entity embeddings: (1/|d|) * sum tf(e) * E[e].
// A convex combination of unit vectors, deliberately not re-normalized.
inline Vec document_embedding(const EntityDocument& doc, const EmbeddingStore& store) {
    if (doc.empty()) fail("cannot embed empty document: ", doc.doc_id);
    Vec acc(static_cast<std::size_t>(store.dim()), 0.0);
    std::size_t total = 0;
    for (const auto& [id, count] : doc.tf) {  // sorted ids: fixed summation order
        const Vec& v = store.at(id);
        for (std::size_t d = 0; d < acc.size(); ++d) {
            acc[d] += static_cast<double>(count) * v[d];
        }
        total += static_cast<std::size_t>(count);
    }
    for (double& x : acc) x /= static_cast<double>(total);
    return acc;
}

// Inverse-squared-distance weights: w_i = d_i^-2 / sum_j d_j^-2, computed in
// rescaled form r_i = (d_min / d_i)^2 so tiny distances cannot overflow.
// Any exact-zero distance collapses the mass uniformly onto the zero set.
inline std::vector<double> topic_weights(const std::vector<double>& dists) {
    if (dists.empty()) fail("topic_weights requires at least one distance");
    std::size_t zeros = 0;
    double d_min = std::numeric_limits<double>::infinity();
    for (double d : dists) {
        if (!(d >= 0.0) || !std::isfinite(d)) fail("distances must be finite and >= 0");
        if (d == 0.0) ++zeros;
        d_min = std::min(d_min, d);
    }
    std::vector<double> w(dists.size(), 0.0);
    if (zeros > 0) {
        const double share = 1.0 / static_cast<double>(zeros);
        for (std::size_t i = 0; i < dists.size(); ++i) {
            if (dists[i] == 0.0) w[i] = share;
        }
        return w;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < dists.size(); ++i) {
        const double r = d_min / dists[i];
        w[i] = r * r;
        total += w[i];
    }
    for (double& x : w) x /= total;
    return w;
}

// Full inference path: embed, measure distances to every centroid, weight.
inline std::vector<double> infer(const EntityDocument& doc, const EmbeddingStore& store,
                                 const Centroids& centroids) {
    const Vec e_d = document_embedding(doc, store);
    return topic_weights(distances(e_d, centroids));
}

}  // namespace tec
