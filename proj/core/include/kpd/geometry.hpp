#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace kpd {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Stall tolerance of the iterative minimizer; also the tolerance at which
// the filtration axioms are asserted by tests.
inline constexpr double kEpsOpt = 1e-9;

// Absolute tolerance of all 1-d bisections (generalized inverses, growth
// birth times, pairwise shape birth times).
inline constexpr double kTolBisect = 1e-12;

inline double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

inline double dist(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(sq_dist(a, b));
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double norm1(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += std::fabs(v);
  return s;
}

// Volume of the d-dimensional unit Euclidean ball, omega_d = omega_{d-2} * 2 pi / d.
inline double unit_ball_volume(int d) {
  double v = (d % 2 == 0) ? 1.0 : 2.0;
  for (int k = (d % 2 == 0) ? 2 : 3; k <= d; k += 2) v *= 2.0 * M_PI / k;
  return v;
}

}  // namespace kpd
