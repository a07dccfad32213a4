#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace dpmod {

/// Fixed, locale-independent rendering used for every CSV and text output so
/// repeated runs are byte-identical.
inline std::string format_double(double v, int digits = 12) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

}  // namespace dpmod
