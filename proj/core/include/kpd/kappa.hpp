#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kpd/point_set.hpp"

namespace kpd {

enum class KappaKind { CechRadii, RipsRadii, CechGrowth, RipsGrowth, CechShape };

std::string kappa_kind_name(KappaKind k);
KappaKind kappa_kind_from_name(const std::string& name);

// Birth-time functional on finite marked point sets. All variants are
// monotone under inclusion (K1), translation invariant (K2) and admit the
// pairwise bound |x - y| <= rho(kappa({x,y})) (K3).
//
// CechRadii   inf_w max_i (|x_i - w| - r_i)^+            rho(t) = 2t + 2R
// RipsRadii   max_{i<j} (|x_i - x_j| - r_i - r_j)^+ / 2  rho(t) = 2t + 2R
// CechGrowth  inf{t : the balls B(x_i, r_i(t)) intersect}
// RipsGrowth  max_{i<j} (r_i + r_j)^{-1}(|x_i - x_j|)    rho(t) = 2 max_f f(t)
// CechShape   inf_w max_i gauge_{C_i}(w - x_i)           rho(t) = 2t max_C diam C
class FiltrationFunction {
 public:
  static FiltrationFunction cech_radii(double radius_cap);
  static FiltrationFunction rips_radii(double radius_cap);
  static FiltrationFunction cech_growth(std::vector<GrowthFunction> family);
  static FiltrationFunction rips_growth(std::vector<GrowthFunction> family);
  static FiltrationFunction cech_shape(std::vector<Shape> family);

  KappaKind kind() const { return kind_; }
  double radius_cap() const { return radius_cap_; }
  const std::vector<GrowthFunction>& growth_family() const { return growth_; }
  const std::vector<Shape>& shape_family() const { return shapes_; }

  // Pairwise reach bound: |x - y| <= rho(kappa({(x,mx),(y,my)})) for every
  // pair whose birth is <= t.
  double rho(double t) const;

  // Birth time of the simplex spanned by the given distinct points.
  // Throws config_error on mark kinds that do not match the filtration kind
  // or ids outside the registered family.
  double birth(int d, std::span<const double> coords,
               std::span<const Mark> marks) const;
  double birth(const MarkedPointSet& set, std::span<const std::int32_t> vertices) const;

 private:
  FiltrationFunction() = default;
  KappaKind kind_ = KappaKind::CechRadii;
  double radius_cap_ = 0.0;
  std::vector<GrowthFunction> growth_;
  std::vector<Shape> shapes_;
};

// Operation-level entry points. coords is row-major |sigma| x d; marks must
// all carry the kind the operation expects.
double eval_cech_radii(int d, std::span<const double> coords,
                       std::span<const Mark> marks, double radius_cap);
double eval_rips_radii(int d, std::span<const double> coords,
                       std::span<const Mark> marks, double radius_cap);
double eval_cech_growth(int d, std::span<const double> coords,
                        std::span<const Mark> marks,
                        std::span<const GrowthFunction> family);
double eval_rips_growth(int d, std::span<const double> coords,
                        std::span<const Mark> marks,
                        std::span<const GrowthFunction> family);
double eval_cech_shape(int d, std::span<const double> coords,
                       std::span<const Mark> marks, std::span<const Shape> family);

}  // namespace kpd
