#pragma once

#include <cstdio>
#include <string>

namespace tdmr {

/// Fixed 17-significant-digit rendering so equal doubles always produce
/// identical CSV bytes.
inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace tdmr
