#include "kpd/marks.hpp"

#include <cmath>
#include <stdexcept>

#include "kpd/errors.hpp"

namespace kpd {

GrowthFunction::GrowthFunction(Kind k, double a, double c, double p)
    : kind_(k), a_(a), c_(c), p_(p) {}

GrowthFunction GrowthFunction::linear(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("growth: linear slope must be > 0");
  return {Kind::Linear, 0.0, c, 1.0};
}

GrowthFunction GrowthFunction::affine(double a, double c) {
  if (!(a >= 0.0) || !(c > 0.0))
    throw std::invalid_argument("growth: affine needs a >= 0 and c > 0");
  return {Kind::Affine, a, c, 1.0};
}

GrowthFunction GrowthFunction::power(double c, double p) {
  if (!(c > 0.0) || !(p > 0.0))
    throw std::invalid_argument("growth: power needs c > 0 and p > 0");
  return {Kind::Power, 0.0, c, p};
}

GrowthFunction GrowthFunction::exp_saturating(double a, double c) {
  if (!(a > 0.0) || !(c > 0.0))
    throw std::invalid_argument("growth: exp_saturating needs a > 0 and c > 0");
  return {Kind::ExpSaturating, a, c, 1.0};
}

double GrowthFunction::value(double t) const {
  if (t < 0.0) throw std::invalid_argument("growth: negative argument");
  switch (kind_) {
    case Kind::Linear: return c_ * t;
    case Kind::Affine: return a_ + c_ * t;
    case Kind::Power: return c_ * std::pow(t, p_);
    case Kind::ExpSaturating: return a_ * (1.0 - std::exp(-c_ * t));
  }
  return 0.0;
}

double GrowthFunction::sup() const {
  return kind_ == Kind::ExpSaturating ? a_ : kInf;
}

double GrowthFunction::inverse(double y) const {
  if (y <= value(0.0)) return 0.0;
  if (!(y < kInf) || y > sup() || (y == sup() && kind_ == Kind::ExpSaturating))
    return kInf;  // saturating functions never attain their sup
  double lo = 0.0, hi = 1.0;
  int guard = 0;
  while (value(hi) < y) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 200) return kInf;  // 2^200 exceeds any sane scale
  }
  while (hi - lo > kTolBisect) {
    const double mid = 0.5 * (lo + hi);
    if (value(mid) >= y)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double sum_inverse(const GrowthFunction& f, const GrowthFunction& g, double y) {
  const double base = f.value(0.0) + g.value(0.0);
  if (y <= base) return 0.0;
  const double cap = f.sup() + g.sup();
  if (y > cap || (y == cap && cap < kInf)) return kInf;
  double lo = 0.0, hi = 1.0;
  int guard = 0;
  while (f.value(hi) + g.value(hi) < y) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 200) return kInf;  // 2^200 exceeds any sane scale
  }
  while (hi - lo > kTolBisect) {
    const double mid = 0.5 * (lo + hi);
    if (f.value(mid) + g.value(mid) >= y)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

Shape Shape::box(std::vector<double> half_widths) {
  if (half_widths.empty()) throw std::invalid_argument("shape: empty box");
  for (double h : half_widths)
    if (!(h > 0.0)) throw std::invalid_argument("shape: box half-widths must be > 0");
  Shape s;
  s.kind_ = Kind::Box;
  s.half_widths_ = std::move(half_widths);
  return s;
}

Shape Shape::ball(double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("shape: ball radius must be > 0");
  Shape s;
  s.kind_ = Kind::Ball;
  s.radius_ = radius;
  return s;
}

Shape Shape::l1(double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("shape: l1 radius must be > 0");
  Shape s;
  s.kind_ = Kind::L1;
  s.radius_ = radius;
  return s;
}

void Shape::validate_dim(int dim) const {
  if (kind_ == Kind::Box && static_cast<int>(half_widths_.size()) != dim)
    throw config_error("shape: box half-width count does not match dimension");
}

double Shape::gauge(std::span<const double> z) const {
  switch (kind_) {
    case Kind::Box: {
      double g = 0.0;
      for (std::size_t k = 0; k < z.size(); ++k)
        g = std::max(g, std::fabs(z[k]) / half_widths_[k]);
      return g;
    }
    case Kind::Ball:
      return norm2(z) / radius_;
    case Kind::L1:
      return norm1(z) / radius_;
  }
  return 0.0;
}

double Shape::diameter() const {
  switch (kind_) {
    case Kind::Box: {
      double s = 0.0;
      for (double h : half_widths_) s += h * h;
      return 2.0 * std::sqrt(s);
    }
    case Kind::Ball:
    case Kind::L1:
      return 2.0 * radius_;
  }
  return 0.0;
}

MarkKind mark_kind(const Mark& m) {
  if (std::holds_alternative<RadiusMark>(m)) return MarkKind::Radius;
  if (std::holds_alternative<GrowthMark>(m)) return MarkKind::Growth;
  if (std::holds_alternative<ShapeMark>(m)) return MarkKind::Shape;
  return MarkKind::Binary;
}

std::string mark_kind_name(MarkKind k) {
  switch (k) {
    case MarkKind::Radius: return "radius";
    case MarkKind::Growth: return "growth";
    case MarkKind::Shape: return "shape";
    case MarkKind::Binary: return "binary";
  }
  return "?";
}

double mark_value(const Mark& m) {
  switch (mark_kind(m)) {
    case MarkKind::Radius: return std::get<RadiusMark>(m).r;
    case MarkKind::Growth: return std::get<GrowthMark>(m).id;
    case MarkKind::Shape: return std::get<ShapeMark>(m).id;
    case MarkKind::Binary: return std::get<BinaryMark>(m).value;
  }
  return 0.0;
}

Mark make_mark(MarkKind kind, double value) {
  switch (kind) {
    case MarkKind::Radius:
      if (!(value >= 0.0)) throw std::invalid_argument("mark: radius must be >= 0");
      return RadiusMark{value};
    case MarkKind::Growth: {
      const int id = static_cast<int>(value);
      if (id < 0 || id != value) throw std::invalid_argument("mark: growth id must be a nonnegative integer");
      return GrowthMark{id};
    }
    case MarkKind::Shape: {
      const int id = static_cast<int>(value);
      if (id < 0 || id != value) throw std::invalid_argument("mark: shape id must be a nonnegative integer");
      return ShapeMark{id};
    }
    case MarkKind::Binary: {
      if (value != 0.0 && value != 1.0) throw std::invalid_argument("mark: binary value must be 0 or 1");
      return BinaryMark{static_cast<std::uint8_t>(value)};
    }
  }
  throw std::invalid_argument("mark: unknown kind");
}

}  // namespace kpd
