#pragma once

#include <span>
#include <string>
#include <vector>

namespace kpd {

// Bounded convex observation window. Cubes are centered at the origin with
// half-open extent [-L/2, L/2)^d, boxes are half-open products
// [lo_k, hi_k), balls are closed Euclidean balls centered at the origin.
class Window {
 public:
  enum class Kind { Cube, Ball, Box };

  static Window cube(int dim, double side);
  static Window ball(int dim, double radius);
  static Window box(std::vector<double> lo, std::vector<double> hi);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  double side() const { return side_; }
  double radius() const { return radius_; }
  const std::vector<double>& lo() const { return lo_; }
  const std::vector<double>& hi() const { return hi_; }

  double volume() const;
  double inradius() const;
  bool contains(std::span<const double> x) const;

  // Axis-aligned bounds; half-open [lo, hi) for cubes/boxes, closed for balls.
  void bounding_box(std::vector<double>& lo, std::vector<double>& hi) const;

  // A window containing this one fattened by h on every side (h >= 0).
  Window padded(double h) const;

  std::string label() const;

 private:
  Kind kind_ = Kind::Cube;
  int dim_ = 0;
  double side_ = 0.0;
  double radius_ = 0.0;
  std::vector<double> lo_, hi_;
};

// Increasing sequence of windows with strictly growing inradius.
class AveragingNet {
 public:
  explicit AveragingNet(std::vector<Window> windows);

  const std::vector<Window>& windows() const { return windows_; }
  std::size_t size() const { return windows_.size(); }
  const Window& operator[](std::size_t i) const { return windows_[i]; }

 private:
  std::vector<Window> windows_;
};

}  // namespace kpd
