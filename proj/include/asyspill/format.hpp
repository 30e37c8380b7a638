#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace asyspill {

/// Shortest-exact text for doubles: 17 significant digits round-trips every finite value.
inline std::string format_double(double v, int significant = 17) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", significant, v);
  return buf;
}

}  // namespace asyspill
