#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "kpd/geometry.hpp"

namespace kpd {

// A right-continuous, strictly increasing map [0,inf) -> [0,inf) with
// value(0) >= 0. Saturating kinds have a finite sup, so the generalized
// inverse can be +inf.
class GrowthFunction {
 public:
  enum class Kind { Linear, Affine, Power, ExpSaturating };

  static GrowthFunction linear(double c);                // c*t
  static GrowthFunction affine(double a, double c);      // a + c*t
  static GrowthFunction power(double c, double p);       // c*t^p
  static GrowthFunction exp_saturating(double a, double c);  // a*(1-exp(-c*t))

  double value(double t) const;
  // Supremum of the range; +inf for unbounded kinds.
  double sup() const;
  // Generalized inverse inf{s >= 0 : value(s) >= y}, +inf when y > sup.
  // Bisection on a doubling bracket, absolute tolerance kTolBisect.
  double inverse(double y) const;

  Kind kind() const { return kind_; }
  double a() const { return a_; }
  double c() const { return c_; }
  double p() const { return p_; }

 private:
  GrowthFunction(Kind k, double a, double c, double p);
  Kind kind_;
  double a_ = 0.0, c_ = 0.0, p_ = 1.0;
};

// Sum of two growth functions; used for pairwise birth times.
double sum_inverse(const GrowthFunction& f, const GrowthFunction& g, double y);

// A bounded convex set containing the origin in its interior, one of the
// closed-form gauge families.
class Shape {
 public:
  enum class Kind { Box, Ball, L1 };

  // [-h_1,h_1] x ... x [-h_d,h_d]
  static Shape box(std::vector<double> half_widths);
  static Shape ball(double radius);
  static Shape l1(double radius);

  // Minkowski gauge inf{s >= 0 : z in s*C}.
  double gauge(std::span<const double> z) const;
  double diameter() const;

  Kind kind() const { return kind_; }
  double radius() const { return radius_; }
  const std::vector<double>& half_widths() const { return half_widths_; }
  // Box needs its half-width count to match the ambient dimension.
  void validate_dim(int dim) const;

 private:
  Shape() = default;
  Kind kind_ = Kind::Ball;
  double radius_ = 1.0;
  std::vector<double> half_widths_;
};

struct RadiusMark {
  double r;
};
struct GrowthMark {
  int id;
};
struct ShapeMark {
  int id;
};
struct BinaryMark {
  std::uint8_t value;
};

using Mark = std::variant<RadiusMark, GrowthMark, ShapeMark, BinaryMark>;

enum class MarkKind { Radius, Growth, Shape, Binary };

MarkKind mark_kind(const Mark& m);
std::string mark_kind_name(MarkKind k);
// Numeric payload as stored in sample CSV files.
double mark_value(const Mark& m);
Mark make_mark(MarkKind kind, double value);

}  // namespace kpd
