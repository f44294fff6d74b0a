#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tec {

// Opaque, language-agnostic entity identifier ("Q2" in the Wikidata-shaped
// test data). Never parsed; compared and sorted as a plain byte string.
using EntityId = std::string;

using Vec = std::vector<double>;

class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

template <typename... Parts>
std::string concat(Parts&&... parts) {
    std::ostringstream oss;
    (oss << ... << std::forward<Parts>(parts));
    return oss.str();
}

}  // namespace detail

template <typename... Parts>
[[noreturn]] void fail(Parts&&... parts) {
    throw Error(detail::concat(std::forward<Parts>(parts)...));
}

}  // namespace tec
