#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

#include "kpd/kappa.hpp"
#include "kpd/point_set.hpp"
#include "kpd/window.hpp"

namespace kpd {

struct Simplex {
  std::vector<std::int32_t> vertices;  // strictly increasing
  double birth = 0.0;

  int dim() const { return static_cast<int>(vertices.size()) - 1; }
};

// Simplices of dimension <= q_max born at or before t_max, sorted by
// (birth, dimension, lexicographic vertices). Faces precede cofaces.
class FilteredComplex {
 public:
  FilteredComplex(MarkedPointSet ground, int q_max, double t_max,
                  std::vector<Simplex> simplices);

  const MarkedPointSet& ground() const { return ground_; }
  int q_max() const { return q_max_; }
  double t_max() const { return t_max_; }
  const std::vector<Simplex>& simplices() const { return simplices_; }
  std::size_t size() const { return simplices_.size(); }

 private:
  MarkedPointSet ground_;
  int q_max_ = 0;
  double t_max_ = 0.0;
  std::vector<Simplex> simplices_;
};

inline constexpr std::size_t kNoBudget = std::numeric_limits<std::size_t>::max();

// Neighbor graph from a grid scan pruned by ||x-y|| <= rho(t_max), then
// incremental clique expansion with births from kappa, clamped from below by
// facet births so stored births are exactly monotone.
FilteredComplex build_filtered_complex(const MarkedPointSet& xi,
                                       const FiltrationFunction& kappa,
                                       int q_max, double t_max,
                                       std::size_t budget = kNoBudget);

// #{sigma : dim sigma = q, birth <= t}; requires q <= q_max, t <= t_max.
std::int64_t simplex_count(const FilteredComplex& cx, int q, double t);

// Simplex count of the complex built over the points of xi inside region.
std::int64_t restrict_complex_counts(const MarkedPointSet& xi,
                                     const Window& region,
                                     const FiltrationFunction& kappa, int q,
                                     double t, std::size_t budget = kNoBudget);

// Debug dump, one line per simplex: dim,birth,v0 v1 ...
void write_complex_dump(const FilteredComplex& cx, std::ostream& os);

}  // namespace kpd
