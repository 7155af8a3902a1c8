#pragma once

#include <cstdio>
#include <string>

namespace clmm::util {

// Shortest decimal form with 12 significant digits, the precision used
// by every emitted table and report.
inline std::string g12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// Rounds through the 12-digit text form so serialized numbers never
// carry more precision than the docs promise.
inline double round12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::strtod(buf, nullptr);
}

}  // namespace clmm::util
