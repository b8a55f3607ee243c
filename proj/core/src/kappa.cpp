#include "kpd/kappa.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "kpd/detail/minimax.hpp"
#include "kpd/errors.hpp"
#include "kpd/geometry.hpp"

namespace kpd {

namespace {

std::span<const double> row(std::span<const double> coords, int d, int i) {
  return coords.subspan(static_cast<std::size_t>(i) * d, d);
}

int count_points(int d, std::span<const double> coords) {
  if (d < 1) throw std::invalid_argument("kappa: dimension must be >= 1");
  if (coords.empty() || coords.size() % d != 0)
    throw std::invalid_argument("kappa: coords must hold n*d entries, n >= 1");
  return static_cast<int>(coords.size() / d);
}

std::vector<double> radii_of(std::span<const Mark> marks, double cap) {
  std::vector<double> r(marks.size());
  for (std::size_t i = 0; i < marks.size(); ++i) {
    const auto* m = std::get_if<RadiusMark>(&marks[i]);
    if (!m) throw config_error("kappa: radius filtration fed a non-radius mark");
    if (m->r < 0.0 || m->r > cap)
      throw config_error("kappa: radius mark outside [0, cap]");
    r[i] = m->r;
  }
  return r;
}

std::vector<const GrowthFunction*> growths_of(std::span<const Mark> marks,
                                              std::span<const GrowthFunction> family) {
  std::vector<const GrowthFunction*> out(marks.size());
  for (std::size_t i = 0; i < marks.size(); ++i) {
    const auto* m = std::get_if<GrowthMark>(&marks[i]);
    if (!m) throw config_error("kappa: growth filtration fed a non-growth mark");
    if (m->id < 0 || m->id >= static_cast<int>(family.size()))
      throw config_error("kappa: growth id outside the registered family");
    out[i] = &family[m->id];
  }
  return out;
}

std::vector<const Shape*> shapes_of(int d, std::span<const Mark> marks,
                                    std::span<const Shape> family) {
  std::vector<const Shape*> out(marks.size());
  for (std::size_t i = 0; i < marks.size(); ++i) {
    const auto* m = std::get_if<ShapeMark>(&marks[i]);
    if (!m) throw config_error("kappa: shape filtration fed a non-shape mark");
    if (m->id < 0 || m->id >= static_cast<int>(family.size()))
      throw config_error("kappa: shape id outside the registered family");
    family[m->id].validate_dim(d);
    out[i] = &family[m->id];
  }
  return out;
}

double pair_radii(double dist, double r1, double r2) {
  return std::max(0.0, 0.5 * (dist - r1 - r2));
}

// ---- shape machinery ---------------------------------------------------

// Half-widths of shape s seen as an axis box scaled by t = 1 (Box only).
double box_pair_value(int d, std::span<const double> x1, const Shape& s1,
                      std::span<const double> x2, const Shape& s2) {
  double v = 0.0;
  for (int k = 0; k < d; ++k) {
    const double w1 = s1.half_widths()[k], w2 = s2.half_widths()[k];
    v = std::max(v, std::fabs(x1[k] - x2[k]) / (w1 + w2));
  }
  return v;
}

// Distance from point p to the axis box [c - t*h, c + t*h], per norm.
double l2_dist_to_box(int d, std::span<const double> p, std::span<const double> c,
                      const std::vector<double>& h, double t) {
  double s = 0.0;
  for (int k = 0; k < d; ++k) {
    const double lo = c[k] - t * h[k], hi = c[k] + t * h[k];
    const double e = p[k] < lo ? lo - p[k] : (p[k] > hi ? p[k] - hi : 0.0);
    s += e * e;
  }
  return std::sqrt(s);
}

double l1_dist_to_box(int d, std::span<const double> p, std::span<const double> c,
                      const std::vector<double>& h, double t) {
  double s = 0.0;
  for (int k = 0; k < d; ++k) {
    const double lo = c[k] - t * h[k], hi = c[k] + t * h[k];
    s += p[k] < lo ? lo - p[k] : (p[k] > hi ? p[k] - hi : 0.0);
  }
  return s;
}

// Euclidean distance from v to the l1 ball of radius rho at the origin.
double l2_dist_to_l1_ball(std::span<const double> v, double rho) {
  const int d = static_cast<int>(v.size());
  double a[8];
  double l1 = 0.0;
  for (int k = 0; k < d; ++k) {
    a[k] = std::fabs(v[k]);
    l1 += a[k];
  }
  if (l1 <= rho) return 0.0;
  std::sort(a, a + d, std::greater<double>());
  // Soft threshold tau with sum_k max(a_k - tau, 0) = rho.
  double prefix = 0.0;
  double tau = 0.0;
  for (int k = 0; k < d; ++k) {
    prefix += a[k];
    const double cand = (prefix - rho) / (k + 1);
    if (k + 1 == d || cand <= a[k + 1]) {
      tau = cand;
      break;
    }
  }
  double s = 0.0;
  for (int k = 0; k < d; ++k) {
    const double r = std::min(std::fabs(v[k]), tau);
    s += r * r;
  }
  return std::sqrt(s);
}

bool pair_intersects(int d, std::span<const double> x1, const Shape& s1,
                     std::span<const double> x2, const Shape& s2, double t) {
  using K = Shape::Kind;
  const K k1 = s1.kind(), k2 = s2.kind();
  if (k1 == K::Box && k2 == K::Ball)
    return l2_dist_to_box(d, x2, x1, s1.half_widths(), t) <= t * s2.radius();
  if (k1 == K::Ball && k2 == K::Box)
    return l2_dist_to_box(d, x1, x2, s2.half_widths(), t) <= t * s1.radius();
  if (k1 == K::Box && k2 == K::L1)
    return l1_dist_to_box(d, x2, x1, s1.half_widths(), t) <= t * s2.radius();
  if (k1 == K::L1 && k2 == K::Box)
    return l1_dist_to_box(d, x1, x2, s2.half_widths(), t) <= t * s1.radius();
  double diff[8];
  for (int k = 0; k < d; ++k) diff[k] = x1[k] - x2[k];
  std::span<const double> v(diff, static_cast<std::size_t>(d));
  if (k1 == K::Ball && k2 == K::L1)
    return l2_dist_to_l1_ball(v, t * s2.radius()) <= t * s1.radius();
  if (k1 == K::L1 && k2 == K::Ball)
    return l2_dist_to_l1_ball(v, t * s1.radius()) <= t * s2.radius();
  throw std::logic_error("pair_intersects: unexpected shape combination");
}

double pair_shape_birth(int d, std::span<const double> x1, const Shape& s1,
                        std::span<const double> x2, const Shape& s2) {
  using K = Shape::Kind;
  if (s1.kind() == s2.kind()) {
    double diff[8];
    for (int k = 0; k < d; ++k) diff[k] = x1[k] - x2[k];
    std::span<const double> v(diff, static_cast<std::size_t>(d));
    switch (s1.kind()) {
      case K::Box:
        return box_pair_value(d, x1, s1, x2, s2);
      case K::Ball:
        return norm2(v) / (s1.radius() + s2.radius());
      case K::L1:
        return norm1(v) / (s1.radius() + s2.radius());
    }
  }
  // Heterogeneous pair: bisect on t with exact intersection predicates.
  // t = gauge_1(x2 - x1) puts x2 inside x1 + t C1, so it brackets from above.
  double diff[8];
  for (int k = 0; k < d; ++k) diff[k] = x2[k] - x1[k];
  double hi = s1.gauge({diff, static_cast<std::size_t>(d)});
  if (hi == 0.0) return 0.0;
  double lo = 0.0;
  while (hi - lo > kTolBisect) {
    const double mid = 0.5 * (lo + hi);
    if (pair_intersects(d, x1, s1, x2, s2, mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

// Linear generator rows of a polyhedral gauge (Box or L1).
void append_gauge_rows(int d, std::span<const double> x, const Shape& s,
                       std::vector<detail::GaugeRow>& rows) {
  using K = Shape::Kind;
  if (s.kind() == K::Box) {
    for (int k = 0; k < d; ++k) {
      for (int sign = -1; sign <= 1; sign += 2) {
        detail::GaugeRow r;
        r.g.assign(d, 0.0);
        r.g[k] = sign;
        r.a = s.half_widths()[k];
        r.gx = sign * x[k];
        rows.push_back(std::move(r));
      }
    }
    return;
  }
  // L1: one row per sign pattern.
  const int patterns = 1 << d;
  for (int m = 0; m < patterns; ++m) {
    detail::GaugeRow r;
    r.g.resize(d);
    double gx = 0.0;
    for (int k = 0; k < d; ++k) {
      r.g[k] = (m >> k) & 1 ? 1.0 : -1.0;
      gx += r.g[k] * x[k];
    }
    r.a = s.radius();
    r.gx = gx;
    rows.push_back(std::move(r));
  }
}

double subgradient_shape(int d, std::span<const double> coords,
                         const std::vector<const Shape*>& shapes) {
  const int n = static_cast<int>(shapes.size());
  std::vector<double> start(d, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k) start[k] += coords[i * d + k];
  for (int k = 0; k < d; ++k) start[k] /= n;

  std::vector<detail::Piece> pieces(n);
  for (int i = 0; i < n; ++i) {
    auto xi = row(coords, d, i);
    const Shape* s = shapes[i];
    pieces[i].value = [d, xi, s](std::span<const double> w) {
      double z[8];
      for (int k = 0; k < d; ++k) z[k] = w[k] - xi[k];
      return s->gauge({z, static_cast<std::size_t>(d)});
    };
    pieces[i].grad = [d, xi, s](std::span<const double> w, std::span<double> out) {
      double z[8];
      for (int k = 0; k < d; ++k) {
        z[k] = w[k] - xi[k];
        out[k] = 0.0;
      }
      switch (s->kind()) {
        case Shape::Kind::Box: {
          int arg = 0;
          double best = -1.0;
          for (int k = 0; k < d; ++k) {
            const double v = std::fabs(z[k]) / s->half_widths()[k];
            if (v > best) {
              best = v;
              arg = k;
            }
          }
          out[arg] = (z[arg] >= 0.0 ? 1.0 : -1.0) / s->half_widths()[arg];
          break;
        }
        case Shape::Kind::Ball: {
          const double nn = norm2({z, static_cast<std::size_t>(d)});
          if (nn > 0.0)
            for (int k = 0; k < d; ++k) out[k] = z[k] / (nn * s->radius());
          break;
        }
        case Shape::Kind::L1: {
          for (int k = 0; k < d; ++k)
            out[k] = (z[k] > 0.0 ? 1.0 : (z[k] < 0.0 ? -1.0 : 0.0)) / s->radius();
          break;
        }
      }
    };
  }
  return detail::minimize_minimax(d, start, pieces).value;
}

}  // namespace

// ---- radii -------------------------------------------------------------

double eval_rips_radii(int d, std::span<const double> coords,
                       std::span<const Mark> marks, double radius_cap) {
  const int n = count_points(d, coords);
  const auto r = radii_of(marks, radius_cap);
  double v = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      v = std::max(v, pair_radii(dist(row(coords, d, i), row(coords, d, j)),
                                 r[i], r[j]));
  return v;
}

double eval_cech_radii(int d, std::span<const double> coords,
                       std::span<const Mark> marks, double radius_cap) {
  const int n = count_points(d, coords);
  const auto r = radii_of(marks, radius_cap);
  if (n == 1) return 0.0;
  if (n == 2)  // shared with the Rips pair so the two agree bitwise
    return pair_radii(dist(row(coords, d, 0), row(coords, d, 1)), r[0], r[1]);
  return std::max(0.0, detail::weighted_ball_minimax(d, coords, r).value);
}

// ---- growth ------------------------------------------------------------

double eval_rips_growth(int d, std::span<const double> coords,
                        std::span<const Mark> marks,
                        std::span<const GrowthFunction> family) {
  const int n = count_points(d, coords);
  const auto g = growths_of(marks, family);
  double v = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      v = std::max(v, sum_inverse(*g[i], *g[j],
                                  dist(row(coords, d, i), row(coords, d, j))));
      if (v == kInf) return kInf;
    }
  return v;
}

double eval_cech_growth(int d, std::span<const double> coords,
                        std::span<const Mark> marks,
                        std::span<const GrowthFunction> family) {
  const int n = count_points(d, coords);
  const auto g = growths_of(marks, family);
  if (n == 1) return 0.0;
  if (n == 2)
    return sum_inverse(*g[0], *g[1], dist(row(coords, d, 0), row(coords, d, 1)));

  // kappa = inf{t : balls B(x_i, r_i(t)) share a point}; the pairwise value
  // is a lower bound, and feasibility at fixed t is decided by the exact
  // radius solver.
  const double lo0 = eval_rips_growth(d, coords, marks, family);
  if (lo0 == kInf) return kInf;

  std::vector<double> radii(n);
  auto feasible = [&](double t) {
    for (int i = 0; i < n; ++i) radii[i] = g[i]->value(t);
    return detail::weighted_ball_minimax(d, coords, radii).value <= 1e-12;
  };

  if (feasible(lo0)) return lo0;

  // Saturating marks bound the limit balls; unbounded marks eventually cover
  // everything, so the t -> inf feasibility only involves the bounded ones.
  {
    std::vector<double> sup_coords;
    std::vector<double> sup_radii;
    for (int i = 0; i < n; ++i) {
      if (g[i]->sup() == kInf) continue;
      auto xi = row(coords, d, i);
      sup_coords.insert(sup_coords.end(), xi.begin(), xi.end());
      sup_radii.push_back(g[i]->sup());
    }
    if (sup_radii.size() >= 2 &&
        detail::weighted_ball_minimax(d, sup_coords, sup_radii).value > 1e-12)
      return kInf;
  }

  double lo = lo0, hi = std::max(lo0, 1.0);
  int guard = 0;
  while (!feasible(hi)) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 200) return kInf;
  }
  while (hi - lo > kTolBisect) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

// ---- shape -------------------------------------------------------------

double eval_cech_shape(int d, std::span<const double> coords,
                       std::span<const Mark> marks, std::span<const Shape> family) {
  const int n = count_points(d, coords);
  const auto shapes = shapes_of(d, marks, family);
  if (n == 1) return 0.0;
  if (n == 2)
    return pair_shape_birth(d, row(coords, d, 0), *shapes[0], row(coords, d, 1),
                            *shapes[1]);

  using K = Shape::Kind;
  bool all_box = true, all_ball = true, all_l1 = true, has_ball = false;
  for (const Shape* s : shapes) {
    all_box &= s->kind() == K::Box;
    all_ball &= s->kind() == K::Ball;
    all_l1 &= s->kind() == K::L1;
    has_ball |= s->kind() == K::Ball;
  }

  if (all_box) {
    // Separable: per axis this is a weighted 1-d minimax with pairwise
    // closed form.
    double v = 0.0;
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          v = std::max(v, std::fabs(coords[i * d + k] - coords[j * d + k]) /
                              (shapes[i]->half_widths()[k] +
                               shapes[j]->half_widths()[k]));
    return v;
  }
  if (all_ball) {
    std::vector<double> a(n);
    for (int i = 0; i < n; ++i) a[i] = shapes[i]->radius();
    return detail::scaled_ball_minimax(d, coords, a).value;
  }
  if (all_l1 && d == 1) {
    double v = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        v = std::max(v, std::fabs(coords[i] - coords[j]) /
                            (shapes[i]->radius() + shapes[j]->radius()));
    return v;
  }
  if (all_l1 && d == 2) {
    // |z|_1 = max(|z1+z2|, |z1-z2|): the rotated problem is an axis box one.
    double v = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double du = (coords[i * 2] + coords[i * 2 + 1]) -
                          (coords[j * 2] + coords[j * 2 + 1]);
        const double dv = (coords[i * 2] - coords[i * 2 + 1]) -
                          (coords[j * 2] - coords[j * 2 + 1]);
        const double den = shapes[i]->radius() + shapes[j]->radius();
        v = std::max(v, std::max(std::fabs(du), std::fabs(dv)) / den);
      }
    return v;
  }
  if (!has_ball && d <= 3) {
    std::vector<detail::GaugeRow> rows;
    for (int i = 0; i < n; ++i) append_gauge_rows(d, row(coords, d, i), *shapes[i], rows);
    if (rows.size() <= 64) {
      auto objective = [&](std::span<const double> w) {
        double v = 0.0;
        double z[8];
        for (int i = 0; i < n; ++i) {
          for (int k = 0; k < d; ++k) z[k] = w[k] - coords[i * d + k];
          v = std::max(v, shapes[i]->gauge({z, static_cast<std::size_t>(d)}));
        }
        return v;
      };
      return detail::polyhedral_minimax(d, rows, coords, objective).value;
    }
  }
  return subgradient_shape(d, coords, shapes);
}

// ---- separable box minimax sanity for the rotated case is covered by tests

// ---- FiltrationFunction ------------------------------------------------

std::string kappa_kind_name(KappaKind k) {
  switch (k) {
    case KappaKind::CechRadii: return "cech_radii";
    case KappaKind::RipsRadii: return "rips_radii";
    case KappaKind::CechGrowth: return "cech_growth";
    case KappaKind::RipsGrowth: return "rips_growth";
    case KappaKind::CechShape: return "cech_shape";
  }
  return "?";
}

KappaKind kappa_kind_from_name(const std::string& name) {
  if (name == "cech_radii") return KappaKind::CechRadii;
  if (name == "rips_radii") return KappaKind::RipsRadii;
  if (name == "cech_growth") return KappaKind::CechGrowth;
  if (name == "rips_growth") return KappaKind::RipsGrowth;
  if (name == "cech_shape") return KappaKind::CechShape;
  throw config_error("unknown kappa kind '" + name + "'");
}

FiltrationFunction FiltrationFunction::cech_radii(double radius_cap) {
  if (!(radius_cap >= 0.0)) throw std::invalid_argument("kappa: radius cap must be >= 0");
  FiltrationFunction f;
  f.kind_ = KappaKind::CechRadii;
  f.radius_cap_ = radius_cap;
  return f;
}

FiltrationFunction FiltrationFunction::rips_radii(double radius_cap) {
  FiltrationFunction f = cech_radii(radius_cap);
  f.kind_ = KappaKind::RipsRadii;
  return f;
}

FiltrationFunction FiltrationFunction::cech_growth(std::vector<GrowthFunction> family) {
  if (family.empty()) throw std::invalid_argument("kappa: empty growth family");
  FiltrationFunction f;
  f.kind_ = KappaKind::CechGrowth;
  f.growth_ = std::move(family);
  return f;
}

FiltrationFunction FiltrationFunction::rips_growth(std::vector<GrowthFunction> family) {
  FiltrationFunction f = cech_growth(std::move(family));
  f.kind_ = KappaKind::RipsGrowth;
  return f;
}

FiltrationFunction FiltrationFunction::cech_shape(std::vector<Shape> family) {
  if (family.empty()) throw std::invalid_argument("kappa: empty shape family");
  FiltrationFunction f;
  f.kind_ = KappaKind::CechShape;
  f.shapes_ = std::move(family);
  return f;
}

double FiltrationFunction::rho(double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("rho: t must be >= 0");
  switch (kind_) {
    case KappaKind::CechRadii:
    case KappaKind::RipsRadii:
      return 2.0 * t + 2.0 * radius_cap_;
    case KappaKind::CechGrowth:
    case KappaKind::RipsGrowth: {
      double m = 0.0;
      for (const auto& g : growth_) m = std::max(m, g.value(t));
      return 2.0 * m;
    }
    case KappaKind::CechShape: {
      double m = 0.0;
      for (const auto& s : shapes_) m = std::max(m, s.diameter());
      return 2.0 * t * m;
    }
  }
  return 0.0;
}

double FiltrationFunction::birth(int d, std::span<const double> coords,
                                 std::span<const Mark> marks) const {
  switch (kind_) {
    case KappaKind::CechRadii:
      return eval_cech_radii(d, coords, marks, radius_cap_);
    case KappaKind::RipsRadii:
      return eval_rips_radii(d, coords, marks, radius_cap_);
    case KappaKind::CechGrowth:
      return eval_cech_growth(d, coords, marks, growth_);
    case KappaKind::RipsGrowth:
      return eval_rips_growth(d, coords, marks, growth_);
    case KappaKind::CechShape:
      return eval_cech_shape(d, coords, marks, shapes_);
  }
  return 0.0;
}

double FiltrationFunction::birth(const MarkedPointSet& set,
                                 std::span<const std::int32_t> vertices) const {
  const int d = set.dim();
  std::vector<double> coords(vertices.size() * d);
  std::vector<Mark> marks(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    auto p = set.position(vertices[i]);
    std::copy(p.begin(), p.end(), coords.begin() + i * d);
    marks[i] = set.mark(vertices[i]);
  }
  return birth(d, coords, marks);
}

}  // namespace kpd
