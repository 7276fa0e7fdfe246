#pragma once

#include <charconv>
#include <string>

namespace riskdp::detail {

// Shortest decimal representation that parses back to the same double.
inline std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

} // namespace riskdp::detail
