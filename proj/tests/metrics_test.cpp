#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include <tec/metrics.hpp>

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<tec::EntityDocument> docs_of(
    const std::vector<std::vector<std::string>>& entity_lists) {
    std::vector<tec::EntityDocument> corpus;
    int i = 0;
    for (const auto& entities : entity_lists) {
        corpus.push_back(tec::EntityDocument::from_entities(
            "d" + std::to_string(i++), {entities.begin(), entities.end()}));
    }
    return corpus;
}

// five documents chaining A-B, A-B-C, C-D, D-E-F, E-F
tec::CooccurrenceStats chain_stats() {
    return tec::build_stats(docs_of(
        {{"A", "B"}, {"A", "B", "C"}, {"C", "D"}, {"D", "E", "F"}, {"E", "F"}}));
}

}  // namespace

TEST_CASE("build_stats counts document-level presence") {
    const auto stats = tec::build_stats(docs_of({{"A", "B", "A"}, {"B"}, {"C"}}));
    CHECK(stats.documents == 3);
    CHECK(stats.doc_frequency("A") == 1);  // repeats within a document count once
    CHECK(stats.doc_frequency("B") == 2);
    CHECK(stats.doc_frequency("C") == 1);
    CHECK(stats.doc_frequency("Z") == 0);
    CHECK(stats.joint_frequency("A", "B") == 1);
    CHECK(stats.joint_frequency("B", "A") == 1);  // unordered
    CHECK(stats.joint_frequency("A", "C") == 0);
    CHECK(stats.joint_frequency("B", "B") == 2);  // self pair = document frequency

    SECTION("empty documents are skipped") {
        auto corpus = docs_of({{"A"}});
        corpus.push_back(tec::EntityDocument::from_entities("hollow", {}));
        CHECK(tec::build_stats(corpus).documents == 1);
    }
    SECTION("a corpus with nothing countable is an error") {
        CHECK_THROWS_WITH(tec::build_stats({tec::EntityDocument::from_entities("hollow", {})}),
                          ContainsSubstring("at least one non-empty document"));
    }
}

TEST_CASE("npmi closed forms") {
    // documents = 4, df(A) = df(B) = 2, joint = 1: pmi = log(1) = 0 exactly
    const auto stats = tec::build_stats(docs_of({{"A", "B"}, {"A"}, {"B"}, {"C"}}));
    CHECK(tec::npmi(stats, "A", "B") == 0.0);
    CHECK(tec::npmi(stats, "A", "B") == tec::npmi(stats, "B", "A"));

    SECTION("never co-occurring pins to -1") {
        CHECK(tec::npmi(stats, "A", "C") == -1.0);
    }
    SECTION("always-together pins to +1") {
        const auto pair_stats = tec::build_stats(docs_of({{"X", "Y"}, {"X", "Y"}, {"Z"}}));
        CHECK(tec::npmi(pair_stats, "X", "Y") == 1.0);
        // in particular entities present in every document (0/0 PMI) pin to +1
        const auto all_stats = tec::build_stats(docs_of({{"X", "Y"}, {"X", "Y"}}));
        CHECK(tec::npmi(all_stats, "X", "Y") == 1.0);
    }
    SECTION("self pair of a ubiquitous entity") {
        CHECK(tec::npmi(stats, "A", "A") == 1.0);
    }
    SECTION("unknown entities are errors") {
        CHECK_THROWS_WITH(tec::npmi(stats, "NOPE", "A"),
                          ContainsSubstring("entity not in co-occurrence stats: NOPE"));
        CHECK_THROWS_WITH(tec::npmi(stats, "A", "NOPE"),
                          ContainsSubstring("entity not in co-occurrence stats: NOPE"));
    }
}

TEST_CASE("npmi over the chain corpus") {
    const auto stats = chain_stats();
    CHECK(stats.documents == 5);
    for (const std::string id : {"A", "B", "C", "D", "E", "F"}) {
        CHECK(stats.doc_frequency(id) == 2);
    }

    // p = 2/5 each; joint 2/5 pins to +1, joint 1/5 gives a fixed positive value
    const double linked = 0.1386468838532138;
    CHECK(tec::npmi(stats, "A", "B") == 1.0);
    CHECK(tec::npmi(stats, "E", "F") == 1.0);
    for (const auto& [a, b] : std::vector<std::pair<std::string, std::string>>{
             {"A", "C"}, {"B", "C"}, {"C", "D"}, {"D", "E"}, {"D", "F"}}) {
        CHECK_THAT(tec::npmi(stats, a, b), WithinAbs(linked, 1e-12));
    }
    for (const auto& [a, b] : std::vector<std::pair<std::string, std::string>>{
             {"A", "D"}, {"A", "E"}, {"A", "F"}, {"B", "D"}, {"B", "E"}, {"B", "F"},
             {"C", "E"}, {"C", "F"}}) {
        CHECK(tec::npmi(stats, a, b) == -1.0);
    }
}

TEST_CASE("topic_coherence averages pairwise npmi over the top entities") {
    const auto stats = chain_stats();
    const std::vector<tec::ScoredEntity> abc{{"A", 0.5}, {"B", 0.3}, {"C", 0.2}};

    // mean of npmi(A,B) = 1, npmi(A,C) = npmi(B,C) = 0.1386...
    const double expected = (1.0 + 2 * 0.1386468838532138) / 3.0;
    CHECK_THAT(tec::topic_coherence(stats, abc, 10), WithinAbs(expected, 1e-12));

    SECTION("n_top truncates the list") {
        CHECK(tec::topic_coherence(stats, abc, 2) == 1.0);  // only (A, B) survives
    }
    SECTION("perfectly co-occurring topic scores 1") {
        const auto pair_stats = tec::build_stats(docs_of({{"X", "Y"}, {"X", "Y"}, {"Z"}}));
        CHECK(tec::topic_coherence(pair_stats, {{"X", 0.6}, {"Y", 0.4}}, 10) == 1.0);
    }
    SECTION("entities outside the corpus are dropped before scoring") {
        const std::vector<tec::ScoredEntity> with_ghost{
            {"GHOST", 0.9}, {"A", 0.05}, {"B", 0.05}};
        CHECK(tec::topic_coherence(stats, with_ghost, 10) == 1.0);
    }
    SECTION("fewer than two scoreable entities scores 0") {
        CHECK(tec::topic_coherence(stats, {{"GHOST", 1.0}, {"A", 0.0}}, 10) == 0.0);
        CHECK(tec::topic_coherence(stats, {{"A", 1.0}}, 10) == 0.0);
    }
    SECTION("n_top below 2 is an error") {
        CHECK_THROWS_WITH(tec::topic_coherence(stats, abc, 1), ContainsSubstring("n_top"));
    }
}

TEST_CASE("topic_diversity is the unique fraction of top slots") {
    using Topic = std::vector<tec::ScoredEntity>;
    const Topic ab{{"A", 0.6}, {"B", 0.4}};
    const Topic cd{{"C", 0.6}, {"D", 0.4}};

    CHECK(tec::topic_diversity({ab, cd}) == 1.0);
    CHECK(tec::topic_diversity({ab, ab}) == 0.5);
    CHECK(tec::topic_diversity({ab}) == 1.0);

    SECTION("only the top slots count") {
        const Topic long_topic{{"A", 0.5}, {"B", 0.3}, {"C", 0.2}};
        // top = 2 ignores C, so the second topic's overlap is total
        CHECK(tec::topic_diversity({long_topic, ab}, 2) == 0.5);
    }
    SECTION("errors") {
        CHECK_THROWS_WITH(tec::topic_diversity({}), ContainsSubstring("at least one topic"));
        CHECK_THROWS_WITH(tec::topic_diversity({ab}, 0), ContainsSubstring("top >= 1"));
        CHECK_THROWS_WITH(tec::topic_diversity({Topic{}}), ContainsSubstring("non-empty"));
    }
}

TEST_CASE("evaluate combines coherence and diversity") {
    const auto stats = chain_stats();
    const std::vector<std::vector<tec::ScoredEntity>> topics{
        {{"A", 0.5}, {"B", 0.3}, {"C", 0.2}},
        {{"D", 0.5}, {"E", 0.3}, {"F", 0.2}}};

    const tec::EvalReport report = tec::evaluate(stats, topics);
    const double tc_each = (1.0 + 2 * 0.1386468838532138) / 3.0;
    REQUIRE(report.per_topic_tc.size() == 2);
    CHECK_THAT(report.per_topic_tc[0], WithinAbs(tc_each, 1e-12));
    CHECK_THAT(report.per_topic_tc[1], WithinAbs(tc_each, 1e-12));
    CHECK_THAT(report.tc, WithinAbs(0.42576458923547583, 1e-12));
    CHECK(report.td == 1.0);
    CHECK(report.tq == report.tc * report.td);
    CHECK(report.n_coherence == 10);
    CHECK(report.top_diversity == 25);

    SECTION("evaluation is deterministic") {
        const tec::EvalReport again = tec::evaluate(stats, topics);
        CHECK(again.tc == report.tc);
        CHECK(again.td == report.td);
        CHECK(again.tq == report.tq);
        CHECK(again.per_topic_tc == report.per_topic_tc);
    }
    SECTION("duplicated topics halve diversity") {
        const tec::EvalReport dup = tec::evaluate(stats, {topics[0], topics[0]});
        CHECK(dup.td == 0.5);
        CHECK_THAT(dup.tq, WithinAbs(dup.tc * 0.5, 1e-15));
    }
}
