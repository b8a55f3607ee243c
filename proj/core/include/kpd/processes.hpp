#pragma once

#include <cstdint>
#include <vector>

#include "kpd/marks.hpp"
#include "kpd/point_set.hpp"
#include "kpd/rng.hpp"
#include "kpd/window.hpp"

namespace kpd {

// Sampling law for a single mark.
class MarkDistribution {
 public:
  enum class Kind {
    RadiusConstant,
    RadiusUniform,
    RadiusDiscrete,
    GrowthCategorical,
    ShapeCategorical,
  };

  static MarkDistribution radius_constant(double r);
  static MarkDistribution radius_uniform(double lo, double hi);
  static MarkDistribution radius_discrete(std::vector<double> values,
                                          std::vector<double> weights);
  static MarkDistribution growth_categorical(std::vector<double> weights);
  static MarkDistribution shape_categorical(std::vector<double> weights);

  Kind kind() const { return kind_; }
  MarkKind mark_kind() const;
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& weights() const { return weights_; }

  Mark sample(Rng& rng) const;

 private:
  Kind kind_ = Kind::RadiusConstant;
  double lo_ = 0.0, hi_ = 0.0;      // constant stores the value in lo_
  std::vector<double> values_;      // discrete radii
  std::vector<double> weights_;     // discrete/categorical weights
};

// Marking strategy: independent marks, or the Matern type I indicator
// (mark 1 iff another point lies within the exclusion distance) followed by
// thinning to the unflagged points, which then receive independent marks.
struct Marking {
  enum class Kind { IID, MaternI };
  Kind kind = Kind::IID;
  double exclusion = 0.0;  // MaternI only
  MarkDistribution mark = MarkDistribution::radius_constant(0.0);
};

struct ProcessSpec {
  double intensity = 1.0;  // points per unit volume
  Marking marking;
  std::uint64_t seed = 0;  // root seed of the experiment
};

// Positions of a homogeneous Poisson process on the window, flat row-major.
// Count ~ Poisson(intensity * volume); uniform positions via per-axis draws,
// rejection from the bounding box for balls. Coinciding positions (a
// probability-zero event) are redrawn so simplicity always holds.
std::vector<double> sample_poisson_ground(double intensity, const Window& window,
                                          Rng& rng);

// Marks drawn independently of positions and of each other, paired in
// enumeration order.
MarkedPointSet attach_iid_marks(const std::vector<double>& positions, int dim,
                                const MarkDistribution& dist, Rng& rng);

// Binary marks: 1 iff another point lies within distance r_exclusion
// (closed). Grid-bucketed neighbor scan.
MarkedPointSet matern_I_marks(const std::vector<double>& positions, int dim,
                              double r_exclusion);

// Keeps exactly the points whose position lies in the region.
MarkedPointSet restrict(const MarkedPointSet& phi, const Window& region);

// Full pipeline for one sample on the window. Matern marking samples on a
// window padded by the exclusion radius, marks, thins to the unflagged
// points, attaches their marks, then restricts; interior marks then agree
// with the stationary definition.
MarkedPointSet draw_sample(const ProcessSpec& spec, const Window& window,
                           std::uint64_t subseed);

}  // namespace kpd
