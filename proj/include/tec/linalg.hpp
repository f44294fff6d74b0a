#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "tec/types.hpp"

namespace tec {

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double l2_norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

inline double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(squared_distance(a, b));
}

inline double cosine(std::span<const double> a, std::span<const double> b) {
    const double na = l2_norm(a);
    const double nb = l2_norm(b);
    if (na == 0.0 || nb == 0.0) fail("cosine of zero vector");
    return dot(a, b) / (na * nb);
}

// In-place L2 normalization; rejects zero/NaN/Inf input.
inline void l2_normalize(Vec& v, const std::string& what) {
    for (double x : v) {
        if (!std::isfinite(x)) fail("non-finite component in ", what);
    }
    const double n = l2_norm(v);
    if (n < 1e-300) fail("zero vector: cannot normalize ", what);
    for (double& x : v) x /= n;
}

inline bool is_unit_norm(std::span<const double> v, double tol = 1e-6) {
    return std::abs(l2_norm(v) - 1.0) <= tol;
}

}  // namespace tec
