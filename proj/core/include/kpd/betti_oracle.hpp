#pragma once

#include <cstdint>

#include "kpd/complex.hpp"

namespace kpd {

// Persistent Betti number beta_q^{r,s} computed directly from explicit cycle
// and boundary spaces over GF(2), independent of the reduction algorithm:
// rank([Z | B]) - rank(B) with Z a cycle basis at level r and B the boundary
// columns at level s. Test fixture only; refuses complexes above 5000
// simplices. Requires 0 <= r <= s <= t_max.
std::int64_t persistent_betti_oracle(const FilteredComplex& cx, int q, double r,
                                     double s);

}  // namespace kpd
