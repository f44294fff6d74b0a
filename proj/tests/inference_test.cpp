#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <tec/inference.hpp>

#include "support/test_rng.hpp"

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

tec::Centroids make_centroids(std::vector<std::vector<double>> rows) {
    tec::Centroids c;
    c.k = static_cast<int>(rows.size());
    c.dim = static_cast<int>(rows[0].size());
    for (const auto& row : rows) c.data.insert(c.data.end(), row.begin(), row.end());
    return c;
}

}  // namespace

TEST_CASE("document_embedding is the tf-weighted mean of entity vectors") {
    tec::EmbeddingStore store(2, tec::Source::Fused);
    store.add("A", {1, 0});
    store.add("B", {0, 1});

    SECTION("tf weights count repeated mentions") {
        const auto doc = tec::EntityDocument::from_entities("d1", {"A", "A", "B"});
        const tec::Vec e = tec::document_embedding(doc, store);
        REQUIRE(e.size() == 2);
        CHECK_THAT(e[0], WithinAbs(2.0 / 3.0, 1e-15));
        CHECK_THAT(e[1], WithinAbs(1.0 / 3.0, 1e-15));
    }
    SECTION("single entity reproduces its vector") {
        const auto doc = tec::EntityDocument::from_entities("d2", {"B"});
        CHECK(tec::document_embedding(doc, store) == tec::Vec{0, 1});
    }
    SECTION("opposite entities can cancel to the zero vector") {
        tec::EmbeddingStore pm(2, tec::Source::Fused);
        pm.add("P", {1, 0});
        pm.add("M", {-1, 0});
        const auto doc = tec::EntityDocument::from_entities("d3", {"P", "M"});
        CHECK(tec::document_embedding(doc, pm) == tec::Vec{0, 0});
    }
    SECTION("empty document is an error naming the document") {
        const auto doc = tec::EntityDocument::from_entities("d4", {});
        CHECK_THROWS_WITH(tec::document_embedding(doc, store),
                          ContainsSubstring("empty document: d4"));
    }
    SECTION("entity missing from the store is an error") {
        const auto doc = tec::EntityDocument::from_entities("d5", {"Z"});
        CHECK_THROWS_WITH(tec::document_embedding(doc, store), ContainsSubstring("Z"));
    }
}

TEST_CASE("topic_weights inverts squared distances") {
    SECTION("closed-form pairs") {
        const auto w = tec::topic_weights({1.0, 2.0});
        CHECK(w == std::vector<double>{0.8, 0.2});

        const auto w2 = tec::topic_weights({1.0, 3.0});
        CHECK_THAT(w2[0], WithinAbs(0.8999999999999999, 1e-15));
        CHECK_THAT(w2[1], WithinAbs(0.09999999999999999, 1e-15));
    }
    SECTION("equal distances share uniformly") {
        const auto w = tec::topic_weights({0.37, 0.37, 0.37});
        for (double x : w) CHECK_THAT(x, WithinAbs(1.0 / 3.0, 1e-15));
    }
    SECTION("a zero distance takes all the mass") {
        CHECK(tec::topic_weights({0.0, 5.0}) == std::vector<double>{1.0, 0.0});
    }
    SECTION("several zero distances split the mass") {
        CHECK(tec::topic_weights({0.0, 0.0, 1.0}) == std::vector<double>{0.5, 0.5, 0.0});
    }
    SECTION("tiny distances do not overflow") {
        const auto w = tec::topic_weights({1e-300, 1e-300});
        CHECK(w == std::vector<double>{0.5, 0.5});
    }
    SECTION("invalid inputs") {
        CHECK_THROWS_WITH(tec::topic_weights({}), ContainsSubstring("at least one"));
        CHECK_THROWS_WITH(tec::topic_weights({1.0, -0.5}), ContainsSubstring("finite"));
        CHECK_THROWS_WITH(tec::topic_weights({1.0, std::nan("")}), ContainsSubstring("finite"));
        CHECK_THROWS_WITH(tec::topic_weights({1.0, std::numeric_limits<double>::infinity()}),
                          ContainsSubstring("finite"));
    }
}

TEST_CASE("topic_weights properties over random inputs") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = 1 + testsupport::pick(rng, 12);
        std::vector<double> d(k);
        for (double& x : d) x = 0.05 + 3.0 * testsupport::u01(rng);
        const auto w = tec::topic_weights(d);

        const double sum = std::accumulate(w.begin(), w.end(), 0.0);
        CHECK_THAT(sum, WithinAbs(1.0, 1e-12));
        for (std::size_t i = 0; i < k; ++i) {
            CHECK(w[i] > 0.0);
            for (std::size_t j = 0; j < k; ++j) {
                if (d[i] < d[j]) CHECK(w[i] >= w[j]);
                if (d[i] == d[j]) CHECK(w[i] == w[j]);
            }
        }

        // invariance under a common positive rescaling of the distances
        std::vector<double> scaled = d;
        for (double& x : scaled) x *= 7.25;
        const auto ws = tec::topic_weights(scaled);
        for (std::size_t i = 0; i < k; ++i) CHECK_THAT(ws[i], WithinAbs(w[i], 1e-12));

        // permutation equivariance
        std::vector<std::size_t> perm(k);
        std::iota(perm.begin(), perm.end(), 0);
        testsupport::shuffle(perm, rng);
        std::vector<double> pd(k);
        for (std::size_t i = 0; i < k; ++i) pd[i] = d[perm[i]];
        // equivariant up to the normalizer's summation order
        const auto wp = tec::topic_weights(pd);
        for (std::size_t i = 0; i < k; ++i) CHECK_THAT(wp[i], WithinAbs(w[perm[i]], 1e-12));
    }
}

TEST_CASE("infer composes embedding, distances and weights") {
    tec::EmbeddingStore store(2, tec::Source::Fused);
    store.add("A", {1, 0});
    const tec::Centroids c = make_centroids({{0, 0}, {4, 0}});
    const auto doc = tec::EntityDocument::from_entities("d1", {"A"});

    // distances 1 and 3 from [1, 0]
    const auto w = tec::infer(doc, store, c);
    REQUIRE(w.size() == 2);
    CHECK_THAT(w[0], WithinAbs(0.8999999999999999, 1e-15));
    CHECK_THAT(w[1], WithinAbs(0.09999999999999999, 1e-15));

    SECTION("document sitting on a centroid takes all the mass") {
        const tec::Centroids on = make_centroids({{1, 0}, {4, 0}});
        CHECK(tec::infer(doc, store, on) == std::vector<double>{1.0, 0.0});
    }
    SECTION("equidistant centroids share uniformly") {
        const tec::Centroids sym = make_centroids({{1, 1}, {1, -1}});
        CHECK(tec::infer(doc, store, sym) == std::vector<double>{0.5, 0.5});
    }
}
