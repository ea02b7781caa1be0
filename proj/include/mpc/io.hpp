#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "mpc/errors.hpp"

namespace mpc {

/// Shortest round-trip decimal form, so emitted files are bit-stable across
/// runs and platforms with the same double values.
inline std::string fmt_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace detail {

inline std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

inline double parse_double(std::string_view field, std::size_t line_no,
                           const char* what) {
    double v = 0.0;
    auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
        throw ParseError(std::string("bad ") + what + " value '" +
                             std::string(field) + "'",
                         line_no);
    return v;
}

inline std::uint64_t parse_u64(std::string_view field, std::size_t line_no,
                               const char* what) {
    std::uint64_t v = 0;
    auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
        throw ParseError(std::string("bad ") + what + " value '" +
                             std::string(field) + "'",
                         line_no);
    return v;
}

}  // namespace detail
}  // namespace mpc
