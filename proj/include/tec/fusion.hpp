#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "tec/embedding_store.hpp"
#include "tec/linalg.hpp"
#include "tec/types.hpp"

namespace tec {

// Alpha weighs the graph embedding against the language-model embedding.
// +infinity is a distinguished value meaning graph-only, so that variant is
// exact rather than a large-float approximation.
inline constexpr double kAlphaInfinity = std::numeric_limits<double>::infinity();

inline void validate_alpha(double alpha) {
    if (std::isnan(alpha) || alpha < 0.0) fail("alpha must be >= 0 or infinity, got ", alpha);
}

// Accepts a decimal number or "inf" (also "infinity", "Inf").
inline double parse_alpha(const std::string& text) {
    if (text == "inf" || text == "Inf" || text == "INF" || text == "infinity") {
        return kAlphaInfinity;
    }
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &consumed);
    } catch (const std::exception&) {
        fail("cannot parse alpha: \"", text, "\"");
    }
    if (consumed != text.size()) fail("cannot parse alpha: \"", text, "\"");
    validate_alpha(value);
    return value;
}

inline std::string alpha_to_string(double alpha) {
    if (std::isinf(alpha)) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", alpha);
    return buf;
}

struct FusionConfig {
    double alpha = 1.0;
    int dim_lm = 0;
    int dim_graph = 0;
};

// Alpha-weighted concatenation of two unit vectors:
//   [ sqrt(1/(1+alpha)) * e_lm ; sqrt(alpha/(1+alpha)) * e_g ]
// The square-root weights make the output unit-norm whenever the inputs are.
// alpha = infinity zeroes the LM block and passes the graph block through.
inline Vec fuse_entity(const Vec& e_lm, const Vec& e_g, double alpha) {
    validate_alpha(alpha);
    if (!is_unit_norm(e_lm)) fail("LM embedding is not unit-norm");
    if (!is_unit_norm(e_g)) fail("graph embedding is not unit-norm");

    double w_lm = 0.0;
    double w_g = 1.0;
    if (!std::isinf(alpha)) {
        w_lm = std::sqrt(1.0 / (1.0 + alpha));
        w_g = std::sqrt(alpha / (1.0 + alpha));
    }
    Vec fused;
    fused.reserve(e_lm.size() + e_g.size());
    for (double x : e_lm) fused.push_back(w_lm * x);
    for (double x : e_g) fused.push_back(w_g * x);
    return fused;
}

// Fuses the two stores over their common vocabulary; dim = dim_lm + dim_graph.
inline EmbeddingStore fuse_store(const EmbeddingStore& lm, const EmbeddingStore& graph,
                                 double alpha) {
    validate_alpha(alpha);
    const std::set<EntityId> vocab = vocabulary_intersection({&lm, &graph});
    EmbeddingStore fused(lm.dim() + graph.dim(), Source::Fused);
    for (const auto& id : vocab) {
        fused.add(id, fuse_entity(lm.at(id), graph.at(id), alpha));
    }
    return fused;
}

}  // namespace tec
