#pragma once

#include <cstdio>
#include <string>

#include "kpd/geometry.hpp"

namespace kpd::detail {

// Shortest-round-trip-ish fixed formatting: %.17g round-trips IEEE doubles
// exactly; infinities serialize as "inf". All emitted files go through this
// so byte-identical reruns only require identical doubles.
inline std::string fmt_double(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& s) {
  if (s == "inf") return kInf;
  if (s == "-inf") return -kInf;
  return std::stod(s);
}

}  // namespace kpd::detail
