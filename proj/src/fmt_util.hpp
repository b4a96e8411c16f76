#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace lteumon::detail {

// Shortest decimal form that parses back to exactly v; fixed-width callers can
// pass an explicit precision instead.
inline std::string fmt_g(double v, int prec = 0) {
    char buf[64];
    if (prec > 0) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        return buf;
    }
    for (int p = 15; p <= 17; ++p) {
        std::snprintf(buf, sizeof buf, "%.*g", p, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

}  // namespace lteumon::detail
