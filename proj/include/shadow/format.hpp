#ifndef SHADOW_FORMAT_HPP
#define SHADOW_FORMAT_HPP

#include <cstdio>
#include <string>

namespace shadow {

// Shortest-faithful decimal form: 17 significant digits round-trip any double.
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace shadow

#endif
