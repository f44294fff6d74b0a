#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tec/aho_corasick.hpp"
#include "tec/document.hpp"
#include "tec/embedding_store.hpp"
#include "tec/lexicon.hpp"
#include "tec/linalg.hpp"
#include "tec/log.hpp"
#include "tec/normalize.hpp"
#include "tec/types.hpp"

namespace tec {

// A matched surface span with its candidate entities. candidates is non-empty
// and sorted by EntityId.
struct CandidateMatch {
    std::string surface;
    int start = 0;
    int end = 0;
    std::vector<EntityId> candidates;

    friend bool operator==(const CandidateMatch&, const CandidateMatch&) = default;
};

// Compiled multi-pattern matcher over one language's surface forms.
class Automaton {
  public:
    Automaton(std::string language, TokenAutomaton matcher,
              std::vector<std::string> surfaces, std::vector<std::vector<EntityId>> candidates)
        : language_(std::move(language)),
          matcher_(std::move(matcher)),
          surfaces_(std::move(surfaces)),
          candidates_(std::move(candidates)) {}

    const std::string& language() const { return language_; }
    std::size_t pattern_count() const { return surfaces_.size(); }
    const std::vector<std::vector<EntityId>>& candidate_lists() const { return candidates_; }
    const TokenAutomaton& matcher() const { return matcher_; }
    const std::string& surface(int pattern) const {
        return surfaces_[static_cast<std::size_t>(pattern)];
    }
    const std::vector<EntityId>& candidates(int pattern) const {
        return candidates_[static_cast<std::size_t>(pattern)];
    }

  private:
    std::string language_;
    TokenAutomaton matcher_;
    std::vector<std::string> surfaces_;
    std::vector<std::vector<EntityId>> candidates_;
};

// Compiles the lexicon's surface forms for one language into an automaton.
// Surface forms are run through the same normalizer the documents will use,
// so lexicon and text agree on token boundaries.
inline Automaton build_automaton(const Lexicon& lexicon, const std::string& language,
                                 const TextNormalizer& normalizer = DefaultNormalizer{}) {
    // surface key (normalized tokens joined by ' ') -> sorted candidate set
    std::map<std::vector<std::string>, std::vector<EntityId>> patterns;
    for (const auto& entry : lexicon.entries()) {
        if (entry.language != language) continue;
        std::vector<std::string> tokens = normalizer.normalize(entry.surface);
        if (tokens.empty()) {
            log_warn(detail::concat("surface form normalizes to nothing, skipped: \"",
                                    entry.surface, "\""));
            continue;
        }
        auto& ids = patterns[tokens];
        if (std::find(ids.begin(), ids.end(), entry.entity_id) == ids.end()) {
            ids.push_back(entry.entity_id);
        }
    }
    if (patterns.empty()) fail("lexicon has no entries for language: ", language);

    TokenAutomaton matcher;
    std::vector<std::string> surfaces;
    std::vector<std::vector<EntityId>> candidates;
    for (auto& [tokens, ids] : patterns) {
        matcher.add_pattern(tokens);
        std::string joined;
        for (const auto& t : tokens) {
            if (!joined.empty()) joined.push_back(' ');
            joined += t;
        }
        surfaces.push_back(std::move(joined));
        std::sort(ids.begin(), ids.end());
        candidates.push_back(std::move(ids));
    }
    matcher.build();
    return Automaton(language, std::move(matcher), std::move(surfaces), std::move(candidates));
}

// Leftmost-longest non-overlapping matches over normalized tokens, left to right.
inline std::vector<CandidateMatch> match_patterns(const Automaton& automaton,
                                                  const std::vector<std::string>& tokens) {
    std::vector<CandidateMatch> out;
    for (const TokenMatch& m : automaton.matcher().find_leftmost_longest(tokens)) {
        out.push_back({automaton.surface(m.pattern), m.start, m.end, automaton.candidates(m.pattern)});
    }
    return out;
}

// Supplies the document-level context vector disambiguation ranks against.
// Returns nullopt when no usable context exists for the document.
class ContextProvider {
  public:
    virtual ~ContextProvider() = default;
    virtual std::optional<Vec> context(const std::vector<CandidateMatch>& matches,
                                       const EmbeddingStore& store) const = 0;
};

// Default context: L2-normalized mean of the embeddings of all unambiguous
// (single-candidate) matches. An external document-embedding service can
// replace this behind the ContextProvider interface.
class UnambiguousMeanContext final : public ContextProvider {
  public:
    std::optional<Vec> context(const std::vector<CandidateMatch>& matches,
                               const EmbeddingStore& store) const override {
        Vec sum(static_cast<std::size_t>(store.dim()), 0.0);
        int count = 0;
        for (const auto& m : matches) {
            if (m.candidates.size() != 1) continue;
            const Vec& v = store.at(m.candidates.front());
            for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += v[i];
            ++count;
        }
        if (count == 0) return std::nullopt;
        const double n = l2_norm(sum);
        if (n < 1e-12) return std::nullopt;  // opposing embeddings cancelled out
        for (double& x : sum) x /= n;
        return sum;
    }
};

// Second extraction stage: keep each match's argmax-cosine candidate iff its
// similarity to the context reaches the threshold, preserving match order.
// Cosine ties resolve to the lowest EntityId (candidates are sorted).
inline std::vector<EntityId> disambiguate(const std::vector<CandidateMatch>& matches,
                                          const Vec& context, const EmbeddingStore& store,
                                          double threshold) {
    if (threshold < -1.0 || threshold > 1.0) {
        fail("disambiguation threshold must be in [-1, 1], got ", threshold);
    }
    if (!is_unit_norm(context)) fail("context vector is not unit-norm");
    std::vector<EntityId> out;
    for (const auto& m : matches) {
        if (m.candidates.empty()) fail("match \"", m.surface, "\" has no candidates");
        const EntityId* best = nullptr;
        double best_sim = 0.0;
        for (const auto& id : m.candidates) {
            const double sim = dot(context, store.at(id));  // both unit-norm
            if (best == nullptr || sim > best_sim) {
                best = &id;
                best_sim = sim;
            }
        }
        if (best_sim >= threshold) out.push_back(*best);
    }
    return out;
}

struct EntitizerOptions {
    double threshold = 0.3;
};

// The full two-stage extractor: normalize, match patterns, build the document
// context, disambiguate, assemble. Pure per document and safe to share across
// threads once constructed.
class Entitizer {
  public:
    Entitizer(const Automaton& automaton, const EmbeddingStore& store,
              EntitizerOptions options = {},
              const TextNormalizer* normalizer = nullptr,
              const ContextProvider* context_provider = nullptr)
        : automaton_(automaton),
          store_(store),
          options_(options),
          normalizer_(normalizer),
          context_provider_(context_provider) {
        if (options_.threshold < -1.0 || options_.threshold > 1.0) {
            fail("disambiguation threshold must be in [-1, 1], got ", options_.threshold);
        }
        // Closed vocabulary: every candidate the automaton can emit must be
        // representable in the embedding store.
        for (const auto& ids : automaton.candidate_lists()) {
            for (const auto& id : ids) {
                if (!store.contains(id)) {
                    fail("lexicon entity missing from embedding store: ", id);
                }
            }
        }
    }

    EntityDocument entitize(std::string doc_id, std::string_view raw_text) const {
        static const DefaultNormalizer default_normalizer;
        static const UnambiguousMeanContext default_context;
        const TextNormalizer& norm = normalizer_ != nullptr ? *normalizer_ : default_normalizer;
        const ContextProvider& ctx = context_provider_ != nullptr ? *context_provider_ : default_context;

        const std::vector<std::string> tokens = norm.normalize(raw_text);
        const std::vector<CandidateMatch> matches = match_patterns(automaton_, tokens);
        const std::optional<Vec> context = ctx.context(matches, store_);

        std::vector<EntityId> entities;
        if (context.has_value()) {
            entities = disambiguate(matches, *context, store_, options_.threshold);
        } else {
            // No context to rank against: ambiguous matches are dropped, the
            // unambiguous ones stand on their own.
            for (const auto& m : matches) {
                if (m.candidates.size() == 1) entities.push_back(m.candidates.front());
            }
        }
        return EntityDocument::from_entities(std::move(doc_id), std::move(entities));
    }

  private:
    const Automaton& automaton_;
    const EmbeddingStore& store_;
    EntitizerOptions options_;
    const TextNormalizer* normalizer_;
    const ContextProvider* context_provider_;
};

}  // namespace tec
