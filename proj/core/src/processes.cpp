#include "kpd/processes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "kpd/errors.hpp"
#include "kpd/geometry.hpp"

namespace kpd {

namespace {

void check_weights(const std::vector<double>& w) {
  if (w.empty()) throw config_error("mark distribution: empty weight list");
  double total = 0.0;
  for (double x : w) {
    if (!(x >= 0.0)) throw config_error("mark distribution: negative weight");
    total += x;
  }
  if (!(total > 0.0)) throw config_error("mark distribution: zero total weight");
}

int sample_index(const std::vector<double>& weights, Rng& rng) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  const double u = rng.uniform() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size()) - 1;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

MarkDistribution MarkDistribution::radius_constant(double r) {
  if (!(r >= 0.0)) throw config_error("mark distribution: radius must be >= 0");
  MarkDistribution d;
  d.kind_ = Kind::RadiusConstant;
  d.lo_ = r;
  return d;
}

MarkDistribution MarkDistribution::radius_uniform(double lo, double hi) {
  if (!(lo >= 0.0) || !(hi >= lo))
    throw config_error("mark distribution: needs 0 <= lo <= hi");
  MarkDistribution d;
  d.kind_ = Kind::RadiusUniform;
  d.lo_ = lo;
  d.hi_ = hi;
  return d;
}

MarkDistribution MarkDistribution::radius_discrete(std::vector<double> values,
                                                   std::vector<double> weights) {
  if (values.empty() || values.size() != weights.size())
    throw config_error("mark distribution: values/weights must match, nonempty");
  for (double v : values)
    if (!(v >= 0.0)) throw config_error("mark distribution: radius must be >= 0");
  check_weights(weights);
  MarkDistribution d;
  d.kind_ = Kind::RadiusDiscrete;
  d.values_ = std::move(values);
  d.weights_ = std::move(weights);
  return d;
}

MarkDistribution MarkDistribution::growth_categorical(std::vector<double> weights) {
  check_weights(weights);
  MarkDistribution d;
  d.kind_ = Kind::GrowthCategorical;
  d.weights_ = std::move(weights);
  return d;
}

MarkDistribution MarkDistribution::shape_categorical(std::vector<double> weights) {
  check_weights(weights);
  MarkDistribution d;
  d.kind_ = Kind::ShapeCategorical;
  d.weights_ = std::move(weights);
  return d;
}

MarkKind MarkDistribution::mark_kind() const {
  switch (kind_) {
    case Kind::RadiusConstant:
    case Kind::RadiusUniform:
    case Kind::RadiusDiscrete:
      return MarkKind::Radius;
    case Kind::GrowthCategorical:
      return MarkKind::Growth;
    case Kind::ShapeCategorical:
      return MarkKind::Shape;
  }
  return MarkKind::Radius;
}

Mark MarkDistribution::sample(Rng& rng) const {
  switch (kind_) {
    case Kind::RadiusConstant:
      return RadiusMark{lo_};
    case Kind::RadiusUniform:
      return RadiusMark{rng.uniform(lo_, hi_)};
    case Kind::RadiusDiscrete:
      return RadiusMark{values_[sample_index(weights_, rng)]};
    case Kind::GrowthCategorical:
      return GrowthMark{sample_index(weights_, rng)};
    case Kind::ShapeCategorical:
      return ShapeMark{sample_index(weights_, rng)};
  }
  return RadiusMark{0.0};
}

std::vector<double> sample_poisson_ground(double intensity, const Window& window,
                                          Rng& rng) {
  if (!(intensity > 0.0))
    throw std::invalid_argument("sampler: intensity must be > 0");
  const int d = window.dim();
  const double vol = window.volume();
  const std::int64_t n = rng.poisson(intensity * vol);

  std::vector<double> lo, hi;
  window.bounding_box(lo, hi);

  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n) * d);
  std::vector<double> p(d);
  for (std::int64_t i = 0; i < n; ++i) {
    for (;;) {  // rejection only rejects for balls
      for (int k = 0; k < d; ++k) p[k] = rng.uniform(lo[k], hi[k]);
      if (window.contains(p)) break;
    }
    out.insert(out.end(), p.begin(), p.end());
  }

  // Simplicity enforcement: coinciding positions have probability zero but
  // would poison every downstream invariant, so redraw offenders.
  for (;;) {
    std::vector<std::size_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::lexicographical_compare(
          out.begin() + a * d, out.begin() + (a + 1) * d, out.begin() + b * d,
          out.begin() + (b + 1) * d);
    });
    bool clean = true;
    for (std::size_t i = 1; i < order.size(); ++i) {
      const std::size_t a = order[i - 1], b = order[i];
      if (std::equal(out.begin() + a * d, out.begin() + (a + 1) * d,
                     out.begin() + b * d)) {
        clean = false;
        for (;;) {
          for (int k = 0; k < d; ++k) p[k] = rng.uniform(lo[k], hi[k]);
          if (window.contains(p)) break;
        }
        std::copy(p.begin(), p.end(), out.begin() + b * d);
      }
    }
    if (clean) break;
  }
  return out;
}

MarkedPointSet attach_iid_marks(const std::vector<double>& positions, int dim,
                                const MarkDistribution& dist, Rng& rng) {
  if (dim < 1 || positions.size() % dim != 0)
    throw std::invalid_argument("attach_iid_marks: bad position array");
  const std::size_t n = positions.size() / dim;
  std::vector<Mark> marks(n);
  for (std::size_t i = 0; i < n; ++i) marks[i] = dist.sample(rng);
  return MarkedPointSet(dim, positions, std::move(marks));
}

MarkedPointSet matern_I_marks(const std::vector<double>& positions, int dim,
                              double r_exclusion) {
  if (dim < 1 || positions.size() % dim != 0)
    throw std::invalid_argument("matern_I_marks: bad position array");
  if (!(r_exclusion >= 0.0))
    throw std::invalid_argument("matern_I_marks: exclusion must be >= 0");
  const std::size_t n = positions.size() / dim;
  std::vector<std::uint8_t> flagged(n, 0);

  if (r_exclusion > 0.0 && n > 1) {
    const double cell = r_exclusion;
    std::vector<std::int64_t> cells(n * dim);
    std::unordered_map<std::uint64_t, std::vector<std::int32_t>> grid;
    auto key = [&](const std::int64_t* c) {
      std::uint64_t h = 0x2545f4914f6cdd1dull;
      for (int k = 0; k < dim; ++k)
        h = mix64(h ^ static_cast<std::uint64_t>(c[k]));
      return h;
    };
    for (std::size_t i = 0; i < n; ++i) {
      for (int k = 0; k < dim; ++k)
        cells[i * dim + k] =
            static_cast<std::int64_t>(std::floor(positions[i * dim + k] / cell));
      grid[key(&cells[i * dim])].push_back(static_cast<std::int32_t>(i));
    }
    std::vector<int> delta(dim, -1);
    std::int64_t nb[8];
    for (std::size_t i = 0; i < n; ++i) {
      std::span<const double> pi(&positions[i * dim],
                                 static_cast<std::size_t>(dim));
      std::fill(delta.begin(), delta.end(), -1);
      bool hit = false;
      for (;;) {
        for (int k = 0; k < dim; ++k) nb[k] = cells[i * dim + k] + delta[k];
        auto it = grid.find(key(nb));
        if (it != grid.end()) {
          for (std::int32_t j : it->second) {
            if (static_cast<std::size_t>(j) == i) continue;
            std::span<const double> pj(&positions[j * dim],
                                       static_cast<std::size_t>(dim));
            if (dist(pi, pj) <= r_exclusion) {
              hit = true;
              break;
            }
          }
        }
        if (hit) break;
        int k = 0;
        while (k < dim && delta[k] == 1) delta[k++] = -1;
        if (k == dim) break;
        ++delta[k];
      }
      flagged[i] = hit ? 1 : 0;
    }
  }

  std::vector<Mark> marks(n);
  for (std::size_t i = 0; i < n; ++i) marks[i] = BinaryMark{flagged[i]};
  return MarkedPointSet(dim, positions, std::move(marks));
}

MarkedPointSet restrict(const MarkedPointSet& phi, const Window& region) {
  const int d = phi.dim();
  std::vector<double> coords;
  std::vector<Mark> marks;
  for (int i = 0; i < phi.size(); ++i) {
    auto p = phi.position(i);
    if (!region.contains(p)) continue;
    coords.insert(coords.end(), p.begin(), p.end());
    marks.push_back(phi.mark(i));
  }
  return MarkedPointSet(d, std::move(coords), std::move(marks));
}

MarkedPointSet draw_sample(const ProcessSpec& spec, const Window& window,
                           std::uint64_t subseed) {
  Rng rng(subseed);
  if (spec.marking.kind == Marking::Kind::IID) {
    const std::vector<double> pos =
        sample_poisson_ground(spec.intensity, window, rng);
    return attach_iid_marks(pos, window.dim(), spec.marking.mark, rng);
  }

  const double r = spec.marking.exclusion;
  const Window padded = window.padded(r);
  const std::vector<double> pos =
      sample_poisson_ground(spec.intensity, padded, rng);
  const MarkedPointSet flagged = matern_I_marks(pos, window.dim(), r);

  std::vector<double> survivors;
  for (int i = 0; i < flagged.size(); ++i) {
    if (mark_value(flagged.mark(i)) != 0.0) continue;
    auto p = flagged.position(i);
    survivors.insert(survivors.end(), p.begin(), p.end());
  }
  const MarkedPointSet marked =
      attach_iid_marks(survivors, window.dim(), spec.marking.mark, rng);
  return restrict(marked, window);
}

}  // namespace kpd
