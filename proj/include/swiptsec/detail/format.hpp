#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace swiptsec::detail {

// Shortest decimal string that round-trips to the same double
// (std::to_chars default); "nan"/"inf"/"-inf" for non-finite values.
// Keeps CSV/JSON output byte-deterministic.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace swiptsec::detail
