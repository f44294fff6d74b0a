#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace tec {

// Turns raw text into the token stream both the lexicon surface forms and the
// documents are matched on. Implementations must be pure and deterministic;
// language-specific lemmatizers plug in behind this interface.
class TextNormalizer {
  public:
    virtual ~TextNormalizer() = default;
    virtual std::vector<std::string> normalize(std::string_view text) const = 0;
};

// ASCII lowercase + whitespace tokenization, with leading/trailing ASCII
// punctuation stripped per token. Bytes >= 0x80 pass through untouched, so
// UTF-8 input stays intact (no case folding beyond ASCII).
class DefaultNormalizer final : public TextNormalizer {
  public:
    std::vector<std::string> normalize(std::string_view text) const override {
        std::vector<std::string> tokens;
        std::string current;
        auto flush = [&] {
            trim_punct(current);
            if (!current.empty()) tokens.push_back(current);
            current.clear();
        };
        for (unsigned char c : text) {
            if (std::isspace(c) != 0) {
                flush();
            } else {
                current.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
            }
        }
        flush();
        return tokens;
    }

  private:
    static bool is_edge_punct(unsigned char c) {
        return c < 0x80 && std::ispunct(c) != 0 && c != '-' && c != '_';
    }

    static void trim_punct(std::string& token) {
        std::size_t begin = 0;
        std::size_t end = token.size();
        while (begin < end && is_edge_punct(static_cast<unsigned char>(token[begin]))) ++begin;
        while (end > begin && is_edge_punct(static_cast<unsigned char>(token[end - 1]))) --end;
        token = token.substr(begin, end - begin);
    }
};

}  // namespace tec
