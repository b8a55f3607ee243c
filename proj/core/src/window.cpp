#include "kpd/window.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "kpd/errors.hpp"
#include "kpd/geometry.hpp"

namespace kpd {

namespace {

void check_dim(int dim) {
  if (dim < 1 || dim > 8)
    throw config_error("window: dimension must be in [1, 8]");
}

std::string trimmed_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

Window Window::cube(int dim, double side) {
  check_dim(dim);
  if (!(side > 0.0)) throw config_error("window: cube side must be > 0");
  Window w;
  w.kind_ = Kind::Cube;
  w.dim_ = dim;
  w.side_ = side;
  return w;
}

Window Window::ball(int dim, double radius) {
  check_dim(dim);
  if (!(radius > 0.0)) throw config_error("window: ball radius must be > 0");
  Window w;
  w.kind_ = Kind::Ball;
  w.dim_ = dim;
  w.radius_ = radius;
  return w;
}

Window Window::box(std::vector<double> lo, std::vector<double> hi) {
  if (lo.empty() || lo.size() != hi.size())
    throw config_error("window: box extents must be nonempty and equal length");
  check_dim(static_cast<int>(lo.size()));
  for (std::size_t k = 0; k < lo.size(); ++k)
    if (!(lo[k] < hi[k])) throw config_error("window: box needs lo < hi per axis");
  Window w;
  w.kind_ = Kind::Box;
  w.dim_ = static_cast<int>(lo.size());
  w.lo_ = std::move(lo);
  w.hi_ = std::move(hi);
  return w;
}

double Window::volume() const {
  switch (kind_) {
    case Kind::Cube:
      return std::pow(side_, dim_);
    case Kind::Ball:
      return unit_ball_volume(dim_) * std::pow(radius_, dim_);
    case Kind::Box: {
      double v = 1.0;
      for (int k = 0; k < dim_; ++k) v *= hi_[k] - lo_[k];
      return v;
    }
  }
  return 0.0;
}

double Window::inradius() const {
  switch (kind_) {
    case Kind::Cube:
      return 0.5 * side_;
    case Kind::Ball:
      return radius_;
    case Kind::Box: {
      double r = kInf;
      for (int k = 0; k < dim_; ++k) r = std::min(r, 0.5 * (hi_[k] - lo_[k]));
      return r;
    }
  }
  return 0.0;
}

bool Window::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw std::invalid_argument("window: point dimension mismatch");
  switch (kind_) {
    case Kind::Cube: {
      const double h = 0.5 * side_;
      for (int k = 0; k < dim_; ++k)
        if (x[k] < -h || x[k] >= h) return false;
      return true;
    }
    case Kind::Ball:
      return norm2(x) <= radius_;
    case Kind::Box:
      for (int k = 0; k < dim_; ++k)
        if (x[k] < lo_[k] || x[k] >= hi_[k]) return false;
      return true;
  }
  return false;
}

void Window::bounding_box(std::vector<double>& lo, std::vector<double>& hi) const {
  lo.assign(dim_, 0.0);
  hi.assign(dim_, 0.0);
  switch (kind_) {
    case Kind::Cube:
      for (int k = 0; k < dim_; ++k) {
        lo[k] = -0.5 * side_;
        hi[k] = 0.5 * side_;
      }
      break;
    case Kind::Ball:
      for (int k = 0; k < dim_; ++k) {
        lo[k] = -radius_;
        hi[k] = radius_;
      }
      break;
    case Kind::Box:
      lo = lo_;
      hi = hi_;
      break;
  }
}

Window Window::padded(double h) const {
  if (!(h >= 0.0)) throw std::invalid_argument("window: padding must be >= 0");
  switch (kind_) {
    case Kind::Cube:
      return cube(dim_, side_ + 2.0 * h);
    case Kind::Ball:
      return ball(dim_, radius_ + h);
    case Kind::Box: {
      std::vector<double> lo = lo_, hi = hi_;
      for (int k = 0; k < dim_; ++k) {
        lo[k] -= h;
        hi[k] += h;
      }
      return box(std::move(lo), std::move(hi));
    }
  }
  return *this;
}

std::string Window::label() const {
  switch (kind_) {
    case Kind::Cube:
      return "cube_" + trimmed_number(side_);
    case Kind::Ball:
      return "ball_" + trimmed_number(radius_);
    case Kind::Box: {
      std::string s = "box_";
      for (int k = 0; k < dim_; ++k) {
        if (k) s += "x";
        s += trimmed_number(hi_[k] - lo_[k]);
      }
      return s;
    }
  }
  return "window";
}

AveragingNet::AveragingNet(std::vector<Window> windows)
    : windows_(std::move(windows)) {
  if (windows_.empty()) throw config_error("net: needs at least one window");
  const int d = windows_[0].dim();
  for (std::size_t i = 0; i < windows_.size(); ++i) {
    if (windows_[i].dim() != d)
      throw config_error("net: windows must share a dimension");
    if (i == 0) continue;
    const Window& a = windows_[i - 1];
    const Window& b = windows_[i];
    if (!(a.inradius() < b.inradius()))
      throw config_error("net: inradius must be strictly increasing");
    std::vector<double> alo, ahi, blo, bhi;
    a.bounding_box(alo, ahi);
    b.bounding_box(blo, bhi);
    for (int k = 0; k < d; ++k)
      if (alo[k] < blo[k] || ahi[k] > bhi[k])
        throw config_error("net: windows must be nested");
  }
}

}  // namespace kpd
