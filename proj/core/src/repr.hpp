#pragma once

#include <charconv>
#include <string>

namespace pixelnorm {

// Shortest decimal form that round-trips exactly through from_chars.
inline std::string shortest_repr(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace pixelnorm
