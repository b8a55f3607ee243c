#pragma once

// Shared hand-checked fixtures.

#include <cmath>

#include "kpd/kappa.hpp"
#include "kpd/point_set.hpp"

namespace kpd::testsupport {

// Unit square corners, zero radii. With cech_radii, q_max = 2, t_max = 1 the
// complex has 14 simplices: 4 vertices at 0, the sides at 1/2, the diagonals
// and all four triangles at sqrt(2)/2.
inline MarkedPointSet unit_square_set() {
  return MarkedPointSet(2, {0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0, 1.0},
                        {RadiusMark{0.0}, RadiusMark{0.0}, RadiusMark{0.0},
                         RadiusMark{0.0}});
}

inline FiltrationFunction unit_square_kappa() {
  return FiltrationFunction::cech_radii(0.0);
}

inline double half_diag() { return std::sqrt(2.0) / 2.0; }

}  // namespace kpd::testsupport
