#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "tec/embedding_store.hpp"
#include "tec/linalg.hpp"
#include "tec/types.hpp"

namespace tec {

struct KMeansConfig {
    std::uint64_t seed = 0;
    int max_iters = 100;
    double tol = 1e-6;
    int n_redo = 3;
};

// K topic centroids in the fused space, plus the training provenance needed
// to reproduce them.
struct Centroids {
    int k = 0;
    int dim = 0;
    std::vector<double> data;  // row-major k x dim
    std::uint64_t seed = 0;
    int iterations_run = 0;
    double inertia = 0.0;
    std::vector<double> inertia_trace;  // per-iteration, winning restart

    std::span<const double> row(int i) const {
        return {data.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(dim),
                static_cast<std::size_t>(dim)};
    }
};

struct Assignment {
    int topic = 0;
    double distance = 0.0;
};

inline std::vector<double> distances(std::span<const double> v, const Centroids& centroids) {
    if (static_cast<int>(v.size()) != centroids.dim) {
        fail("vector dimension ", v.size(), " does not match centroid dimension ", centroids.dim);
    }
    std::vector<double> d(static_cast<std::size_t>(centroids.k));
    for (int i = 0; i < centroids.k; ++i) {
        d[static_cast<std::size_t>(i)] = euclidean_distance(v, centroids.row(i));
    }
    return d;
}

// Nearest centroid by Euclidean distance; ties go to the lowest topic id.
inline Assignment assign(std::span<const double> v, const Centroids& centroids) {
    if (static_cast<int>(v.size()) != centroids.dim) {
        fail("vector dimension ", v.size(), " does not match centroid dimension ", centroids.dim);
    }
    int best = 0;
    double best_sq = std::numeric_limits<double>::infinity();
    for (int i = 0; i < centroids.k; ++i) {
        const double sq = squared_distance(v, centroids.row(i));
        if (sq < best_sq) {
            best_sq = sq;
            best = i;
        }
    }
    return {best, std::sqrt(best_sq)};
}

namespace detail {

// Portable uniform in [0, 1): 53 mantissa bits straight from the generator,
// so runs are reproducible across standard libraries.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct PointMatrix {
    std::size_t n = 0;
    std::size_t dim = 0;
    std::vector<double> data;

    std::span<const double> row(std::size_t i) const { return {data.data() + i * dim, dim}; }
};

// k-means++ seeding: first center uniform, then proportional to squared
// distance from the chosen set. Falls back to the first unchosen point when
// every remaining point coincides with a chosen center.
inline std::vector<std::size_t> kmeanspp_init(const PointMatrix& points, int k,
                                              std::mt19937_64& rng) {
    const std::size_t n = points.n;
    std::vector<std::size_t> chosen;
    std::vector<bool> is_chosen(n, false);
    std::vector<double> min_sq(n, std::numeric_limits<double>::infinity());

    std::size_t first = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
    if (first >= n) first = n - 1;
    chosen.push_back(first);
    is_chosen[first] = true;
    for (std::size_t i = 0; i < n; ++i) {
        min_sq[i] = squared_distance(points.row(i), points.row(first));
    }

    while (chosen.size() < static_cast<std::size_t>(k)) {
        double total = 0.0;
        for (double d : min_sq) total += d;
        std::size_t pick = n;
        if (total > 0.0) {
            const double r = uniform01(rng) * total;
            double cumulative = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                cumulative += min_sq[i];
                if (cumulative > r) {
                    pick = i;
                    break;
                }
            }
        }
        if (pick >= n) {
            // All mass at zero (duplicate points); take the first unchosen.
            for (std::size_t i = 0; i < n; ++i) {
                if (!is_chosen[i]) {
                    pick = i;
                    break;
                }
            }
            if (pick >= n) pick = n - 1;
        }
        chosen.push_back(pick);
        is_chosen[pick] = true;
        for (std::size_t i = 0; i < n; ++i) {
            min_sq[i] = std::min(min_sq[i], squared_distance(points.row(i), points.row(pick)));
        }
    }
    return chosen;
}

struct LloydResult {
    std::vector<double> centroids;
    int iterations = 0;
    double inertia = 0.0;
    std::vector<double> inertia_trace;
};

inline LloydResult lloyd(const PointMatrix& points, int k, const KMeansConfig& config,
                         std::mt19937_64& rng) {
    const std::size_t n = points.n;
    const std::size_t dim = points.dim;
    const std::size_t uk = static_cast<std::size_t>(k);

    std::vector<double> centroids(uk * dim);
    {
        const std::vector<std::size_t> init = kmeanspp_init(points, k, rng);
        for (std::size_t c = 0; c < uk; ++c) {
            const auto row = points.row(init[c]);
            std::copy(row.begin(), row.end(), centroids.begin() + static_cast<std::ptrdiff_t>(c * dim));
        }
    }

    std::vector<int> labels(n, 0);
    std::vector<double> point_sq(n, 0.0);
    LloydResult result;

    auto assign_all = [&]() {
        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_sq = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < uk; ++c) {
                const double sq = squared_distance(
                    points.row(i), {centroids.data() + c * dim, dim});
                if (sq < best_sq) {
                    best_sq = sq;
                    best = static_cast<int>(c);
                }
            }
            labels[i] = best;
            point_sq[i] = best_sq;
            inertia += best_sq;
        }
        return inertia;
    };

    int iter = 0;
    while (iter < config.max_iters) {
        ++iter;
        result.inertia_trace.push_back(assign_all());

        // Means accumulated in point (sorted-EntityId) order: reproducible sums.
        std::vector<double> sums(uk * dim, 0.0);
        std::vector<std::size_t> counts(uk, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto row = points.row(i);
            const std::size_t c = static_cast<std::size_t>(labels[i]);
            for (std::size_t d = 0; d < dim; ++d) sums[c * dim + d] += row[d];
            ++counts[c];
        }

        std::vector<double> updated(uk * dim);
        for (std::size_t c = 0; c < uk; ++c) {
            if (counts[c] > 0) {
                for (std::size_t d = 0; d < dim; ++d) {
                    updated[c * dim + d] = sums[c * dim + d] / static_cast<double>(counts[c]);
                }
            }
        }
        // Empty-cluster repair: hand the cluster the point currently farthest
        // from its own centroid, one point per empty cluster.
        std::vector<bool> stolen(n, false);
        for (std::size_t c = 0; c < uk; ++c) {
            if (counts[c] > 0) continue;
            std::size_t farthest = n;
            double far_sq = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (stolen[i]) continue;
                if (point_sq[i] > far_sq) {
                    far_sq = point_sq[i];
                    farthest = i;
                }
            }
            if (farthest == n) break;  // fewer distinct points than clusters
            stolen[farthest] = true;
            const auto row = points.row(farthest);
            std::copy(row.begin(), row.end(),
                      updated.begin() + static_cast<std::ptrdiff_t>(c * dim));
        }

        double max_shift_sq = 0.0;
        for (std::size_t c = 0; c < uk; ++c) {
            max_shift_sq = std::max(max_shift_sq,
                                    squared_distance({centroids.data() + c * dim, dim},
                                                     {updated.data() + c * dim, dim}));
        }
        centroids.swap(updated);
        if (std::sqrt(max_shift_sq) < config.tol) break;
    }

    result.inertia = assign_all();
    result.inertia_trace.push_back(result.inertia);
    result.iterations = iter;
    result.centroids = std::move(centroids);
    return result;
}

inline PointMatrix store_to_matrix(const EmbeddingStore& store) {
    PointMatrix m;
    m.n = store.size();
    m.dim = static_cast<std::size_t>(store.dim());
    m.data.reserve(m.n * m.dim);
    for (const auto& [id, v] : store.vectors()) {
        m.data.insert(m.data.end(), v.begin(), v.end());
    }
    return m;
}

}  // namespace detail

// Lloyd's algorithm with k-means++ seeding; n_redo restarts, lowest final
// inertia wins. Deterministic for a fixed (store, K, config).
inline Centroids train_kmeans(const EmbeddingStore& store, int k, const KMeansConfig& config = {}) {
    if (k < 1) fail("number of topics must be >= 1, got ", k);
    if (store.size() < static_cast<std::size_t>(k)) {
        fail("cannot train ", k, " topics from ", store.size(), " entities");
    }
    if (config.max_iters < 1) fail("max_iters must be >= 1");
    if (config.n_redo < 1) fail("n_redo must be >= 1");
    if (!(config.tol >= 0.0)) fail("tol must be >= 0");

    const detail::PointMatrix points = detail::store_to_matrix(store);
    std::mt19937_64 rng(config.seed);

    detail::LloydResult best;
    bool have_best = false;
    for (int redo = 0; redo < config.n_redo; ++redo) {
        detail::LloydResult run = detail::lloyd(points, k, config, rng);
        if (!have_best || run.inertia < best.inertia) {
            best = std::move(run);
            have_best = true;
        }
    }

    Centroids out;
    out.k = k;
    out.dim = store.dim();
    out.data = std::move(best.centroids);
    out.seed = config.seed;
    out.iterations_run = best.iterations;
    out.inertia = best.inertia;
    out.inertia_trace = std::move(best.inertia_trace);
    return out;
}

}  // namespace tec
