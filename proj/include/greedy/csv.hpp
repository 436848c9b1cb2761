#pragma once

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace greedy {

// Shortest round-trip decimal form; deterministic, so re-exports of the same
// statistics are byte-identical.
inline std::string fmt_num(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
    return std::string(buf, ptr);
}

inline std::string fmt_num(unsigned long long v) { return std::to_string(v); }
inline std::string fmt_num(unsigned long v) { return std::to_string(v); }
inline std::string fmt_num(unsigned v) { return std::to_string(v); }

}  // namespace greedy
