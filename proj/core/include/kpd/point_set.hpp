#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "kpd/marks.hpp"

namespace kpd {

struct MarkedPointRef {
  std::span<const double> pos;
  const Mark* mark;
};

// Finite marked point set in R^d. Positions are pairwise distinct
// (simplicity); construction throws simplicity_error otherwise.
class MarkedPointSet {
 public:
  explicit MarkedPointSet(int dim);
  // coords is row-major, n*dim entries.
  MarkedPointSet(int dim, std::vector<double> coords, std::vector<Mark> marks);

  void add(std::span<const double> pos, Mark mark);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(marks_.size()); }
  std::span<const double> position(int i) const {
    return {coords_.data() + static_cast<std::size_t>(i) * dim_,
            static_cast<std::size_t>(dim_)};
  }
  const Mark& mark(int i) const { return marks_[i]; }
  MarkedPointRef ref(int i) const { return {position(i), &marks_[i]}; }
  const std::vector<double>& coords() const { return coords_; }
  const std::vector<Mark>& marks() const { return marks_; }

  // Throws simplicity_error naming the first coinciding pair.
  void check_simplicity() const;

 private:
  int dim_;
  std::vector<double> coords_;
  std::vector<Mark> marks_;
};

// Sample file schema: header x1,...,xd,mark_kind,mark_value then one row per
// point. mark_kind is one of radius|growth|shape|binary.
void write_points_csv(const MarkedPointSet& set, std::ostream& out);
// Throws std::runtime_error naming the offending 1-based line on parse
// failures; throws simplicity_error on duplicate positions.
MarkedPointSet read_points_csv(std::istream& in);

}  // namespace kpd
