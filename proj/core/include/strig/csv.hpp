// Small CSV helpers shared by reports and the experiment harness.

#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace strig {

// 17 significant digits: enough to round-trip any double exactly.
inline std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace strig
