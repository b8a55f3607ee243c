#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "kpd/window.hpp"

namespace kpd {

// Lattice-cube decomposition of a window: cells [z - M/2, z + M/2)^d with
// z in M Z^d. Inner cells lie inside the window, outer cells merely meet it.
struct WindowDecomposition {
  int dim = 0;
  double M = 0.0;
  std::vector<double> inner_centers;  // row-major, inner_count() * dim
  std::vector<double> outer_centers;

  std::size_t inner_count() const { return dim ? inner_centers.size() / dim : 0; }
  std::size_t outer_count() const { return dim ? outer_centers.size() / dim : 0; }
  double inner_volume() const;
  double outer_volume() const;
};

// Exact membership for cubes/boxes; closed-form distance tests for balls.
WindowDecomposition decompose_window(const Window& a, double m);

// Volume of the two-sided shell {x : d(x, boundary of A) <= h}:
// cubes (L+2h)^d - max(L-2h,0)^d, boxes the per-axis analog, balls
// omega_d ((rho+h)^d - max(rho-h,0)^d).
double boundary_shell_volume(const Window& a, double h);

struct RatioRow {
  std::string label;
  double volume = 0.0;
  double inner_ratio = 0.0;    // inner-cell volume / window volume -> 1
  double annulus_ratio = 0.0;  // (outer - inner) cell volume / window volume -> 0
  double shell_ratio = 0.0;    // fraction of the window within h of its boundary -> 0
};

struct RatioTable {
  std::vector<RatioRow> rows;
  bool inner_monotone = false;    // nondecreasing along the net
  bool annulus_monotone = false;  // nonincreasing
  bool shell_monotone = false;    // nonincreasing
};

RatioTable verify_window_asymptotics(const AveragingNet& net, double m, double h);

// CSV: label,volume,inner_ratio,annulus_ratio,shell_ratio
void write_ratio_table_csv(const RatioTable& table, std::ostream& out);

}  // namespace kpd
