#pragma once

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <string>
#include <string_view>
#include <utility>

#include "tec/types.hpp"

namespace tec {

enum class LogLevel : int { Error = 0, Warn = 1, Info = 2, Debug = 3 };

namespace detail {

inline std::atomic<int>& log_level_raw() {
    static std::atomic<int> level{static_cast<int>(LogLevel::Warn)};
    return level;
}

// Single stream write per line so concurrent workers don't interleave.
inline void log_line(LogLevel level, std::string_view tag, const std::string& msg) {
    if (static_cast<int>(level) > detail::log_level_raw().load()) return;
    std::cerr << concat("[tec ", tag, "] ", msg, "\n");
}

}  // namespace detail

inline void set_log_level(LogLevel level) {
    detail::log_level_raw().store(static_cast<int>(level));
}

// Reads TEC_LOG (error|warn|info|debug); unknown values are ignored.
inline void set_log_level_from_env() {
    const char* env = std::getenv("TEC_LOG");
    if (env == nullptr) return;
    std::string v(env);
    if (v == "error") set_log_level(LogLevel::Error);
    else if (v == "warn") set_log_level(LogLevel::Warn);
    else if (v == "info") set_log_level(LogLevel::Info);
    else if (v == "debug") set_log_level(LogLevel::Debug);
}

template <typename... Parts>
inline void log_error(Parts&&... parts) {
    detail::log_line(LogLevel::Error, "error", detail::concat(std::forward<Parts>(parts)...));
}

template <typename... Parts>
inline void log_warn(Parts&&... parts) {
    detail::log_line(LogLevel::Warn, "warn", detail::concat(std::forward<Parts>(parts)...));
}

template <typename... Parts>
inline void log_info(Parts&&... parts) {
    detail::log_line(LogLevel::Info, "info", detail::concat(std::forward<Parts>(parts)...));
}

template <typename... Parts>
inline void log_debug(Parts&&... parts) {
    detail::log_line(LogLevel::Debug, "debug", detail::concat(std::forward<Parts>(parts)...));
}

}  // namespace tec
