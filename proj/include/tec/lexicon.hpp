#pragma once

#include <fstream>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "tec/types.hpp"

namespace tec {

// One surface-form row: a normalized text pattern that refers to an entity in
// one language. The same (surface, language) pair may map to several entities;
// picking among them is the entitizer's disambiguation step.
struct LexiconEntry {
    std::string surface;
    EntityId entity_id;
    std::string language;

    friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
    friend auto operator<=>(const LexiconEntry&, const LexiconEntry&) = default;
};

class Lexicon {
  public:
    Lexicon() = default;

    // Adds an entry unless the identical row is already present.
    void add(LexiconEntry entry) {
        if (entry.surface.empty()) fail("lexicon entry has empty surface form");
        if (entry.entity_id.empty()) fail("lexicon entry has empty entity id");
        if (entry.language.empty()) fail("lexicon entry has empty language");
        if (seen_.insert(entry).second) entries_.push_back(std::move(entry));
    }

    const std::vector<LexiconEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    std::vector<LexiconEntry> entries_for_language(const std::string& language) const {
        std::vector<LexiconEntry> out;
        for (const auto& e : entries_) {
            if (e.language == language) out.push_back(e);
        }
        return out;
    }

    void save(const std::string& path) const {
        std::ofstream out(path);
        if (!out) fail("cannot open lexicon file for writing: ", path);
        for (const auto& e : entries_) {
            out << e.surface << '\t' << e.entity_id << '\t' << e.language << '\n';
        }
        if (!out) fail("write failed for lexicon file: ", path);
    }

  private:
    std::vector<LexiconEntry> entries_;
    std::set<LexiconEntry> seen_;
};

// Parses a UTF-8 TSV lexicon: `surface \t entity_id \t language` per row,
// `#`-prefixed comment lines and blank lines skipped, identical rows
// deduplicated. Malformed rows are an error naming the 1-based line number.
inline Lexicon load_lexicon(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open lexicon file: ", path);

    Lexicon lexicon;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;

        const auto first_tab = line.find('\t');
        const auto second_tab = first_tab == std::string::npos
                                    ? std::string::npos
                                    : line.find('\t', first_tab + 1);
        if (first_tab == std::string::npos || second_tab == std::string::npos ||
            line.find('\t', second_tab + 1) != std::string::npos) {
            fail("malformed lexicon row at line ", line_no, " in ", path,
                 ": expected 3 tab-separated columns");
        }
        LexiconEntry entry{line.substr(0, first_tab),
                           line.substr(first_tab + 1, second_tab - first_tab - 1),
                           line.substr(second_tab + 1)};
        if (entry.surface.empty() || entry.entity_id.empty() || entry.language.empty()) {
            fail("malformed lexicon row at line ", line_no, " in ", path, ": empty field");
        }
        lexicon.add(std::move(entry));
    }
    if (lexicon.empty()) fail("lexicon file has no entries: ", path);
    return lexicon;
}

}  // namespace tec
