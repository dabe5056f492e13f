#pragma once

// Number formatting for CSV/plot output: shortest decimal that round-trips,
// '.' decimal point, no locale involvement.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>

namespace ruinlab::detail {

inline void append_number(std::string& s, double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    s.append(buf, res.ptr);
}

inline void append_number(std::string& s, std::uint64_t v) {
    char buf[24];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    s.append(buf, res.ptr);
}

} // namespace ruinlab::detail
