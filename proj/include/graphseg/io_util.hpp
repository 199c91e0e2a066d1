#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>

namespace graphseg {

// Shortest round-trip decimal form of a double; locale-independent.
inline std::string fmt_double(double x) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, p);
}

// Fixed-precision form, for SVG coordinates and similar output where
// byte stability matters more than exactness.
inline std::string fmt_fixed(double x, int precision) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), x,
                                 std::chars_format::fixed, precision);
    return std::string(buf, p);
}

// Strict full-field double parse; rejects trailing garbage.
inline std::optional<double> parse_double(std::string_view s) {
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace graphseg
