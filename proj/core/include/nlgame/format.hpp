#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace nlgame {

/// Rounds to `digits` significant decimal digits (report output convention).
inline double round_sig(double v, int digits = 9) {
  if (v == 0.0 || !std::isfinite(v)) return v;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return std::strtod(buf, nullptr);
}

inline std::string format_sig(double v, int digits = 9) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

}  // namespace nlgame
