#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "tec/types.hpp"

namespace tec {

// Half-open token span [start, end) matching pattern id `pattern`.
struct TokenMatch {
    int pattern = 0;
    int start = 0;
    int end = 0;

    friend bool operator==(const TokenMatch&, const TokenMatch&) = default;
};

// Aho-Corasick automaton whose alphabet is whole tokens rather than bytes, so
// matches land on word boundaries by construction. Build once, match many.
class TokenAutomaton {
  public:
    int add_pattern(const std::vector<std::string>& tokens) {
        if (built_) fail("cannot add patterns to a built automaton");
        if (tokens.empty()) fail("cannot add empty pattern");
        int node = 0;
        for (const auto& token : tokens) {
            auto it = nodes_[node].next.find(token);
            if (it == nodes_[node].next.end()) {
                nodes_.push_back({});
                it = nodes_[node].next.emplace(token, static_cast<int>(nodes_.size()) - 1).first;
            }
            node = it->second;
        }
        const int id = static_cast<int>(pattern_lengths_.size());
        pattern_lengths_.push_back(static_cast<int>(tokens.size()));
        nodes_[node].out.push_back(id);
        return id;
    }

    std::size_t pattern_count() const { return pattern_lengths_.size(); }

    void build() {
        if (built_) return;
        std::deque<int> queue;
        for (auto& [token, child] : nodes_[0].next) {
            nodes_[child].fail = 0;
            queue.push_back(child);
        }
        while (!queue.empty()) {
            const int node = queue.front();
            queue.pop_front();
            for (auto& [token, child] : nodes_[node].next) {
                int fallback = nodes_[node].fail;
                while (fallback != 0 && nodes_[fallback].next.count(token) == 0) {
                    fallback = nodes_[fallback].fail;
                }
                auto it = nodes_[fallback].next.find(token);
                nodes_[child].fail = (it != nodes_[fallback].next.end() && it->second != child)
                                         ? it->second
                                         : 0;
                // Suffix outputs are folded in so matching never walks fail chains.
                const auto& inherited = nodes_[nodes_[child].fail].out;
                nodes_[child].out.insert(nodes_[child].out.end(), inherited.begin(),
                                         inherited.end());
                queue.push_back(child);
            }
        }
        built_ = true;
    }

    // All occurrences of all patterns, in order of match end position.
    std::vector<TokenMatch> find_all(const std::vector<std::string>& tokens) const {
        if (!built_) fail("automaton not built");
        std::vector<TokenMatch> matches;
        int state = 0;
        for (int i = 0; i < static_cast<int>(tokens.size()); ++i) {
            const std::string& token = tokens[static_cast<std::size_t>(i)];
            while (state != 0 && nodes_[state].next.count(token) == 0) {
                state = nodes_[state].fail;
            }
            auto it = nodes_[state].next.find(token);
            state = it != nodes_[state].next.end() ? it->second : 0;
            for (int pattern : nodes_[state].out) {
                matches.push_back({pattern, i + 1 - pattern_lengths_[static_cast<std::size_t>(pattern)], i + 1});
            }
        }
        return matches;
    }

    // Leftmost-longest non-overlapping selection: among matches starting at the
    // leftmost available position the longest wins, and its span is consumed.
    std::vector<TokenMatch> find_leftmost_longest(const std::vector<std::string>& tokens) const {
        std::vector<TokenMatch> matches = find_all(tokens);
        std::sort(matches.begin(), matches.end(), [](const TokenMatch& a, const TokenMatch& b) {
            if (a.start != b.start) return a.start < b.start;
            if (a.end != b.end) return a.end > b.end;
            return a.pattern < b.pattern;
        });
        std::vector<TokenMatch> kept;
        int available = 0;
        for (const auto& m : matches) {
            if (m.start >= available) {
                kept.push_back(m);
                available = m.end;
            }
        }
        return kept;
    }

  private:
    struct Node {
        std::map<std::string, int> next;
        int fail = 0;
        std::vector<int> out;
    };

    std::vector<Node> nodes_{Node{}};
    std::vector<int> pattern_lengths_;
    bool built_ = false;
};

}  // namespace tec
