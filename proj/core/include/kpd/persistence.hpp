#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "kpd/complex.hpp"

namespace kpd {

struct PersistencePair {
  int dim = 0;
  double birth = 0.0;
  double death = 0.0;  // +inf for essential/censored classes
  bool censored = false;
};

// Birth-death pairs of a filtered complex, viewed as a counting measure on
// {(x, y) : x < y}. Zero-persistence pairs are discarded. Deaths beyond
// t_max are +inf with the censored flag set rather than clamped.
class PersistenceDiagram {
 public:
  PersistenceDiagram(int q_max, double t_max, std::vector<PersistencePair> pairs);

  int q_max() const { return q_max_; }
  double t_max() const { return t_max_; }
  const std::vector<PersistencePair>& pairs() const { return pairs_; }

 private:
  int q_max_ = 0;
  double t_max_ = 0.0;
  std::vector<PersistencePair> pairs_;  // sorted by (dim, birth, death)
};

// Column reduction of the boundary matrix over GF(2) in filtration order.
PersistenceDiagram reduce(const FilteredComplex& cx);

// #pairs of dimension q with birth <= r and death > s. Requires
// 0 <= r <= s < t_max, which makes the count exact despite censoring.
std::int64_t persistent_betti(const PersistenceDiagram& dgm, int q, double r,
                              double s);

// Query rectangles within {(x, y) : x < y}: (r1, r2] x (s1, s2] or the
// zero-anchored [0, r2] x (s1, s2]. s2 may be t_max or +inf; censored deaths
// stay decidable for both.
struct Rectangle {
  enum class Kind { HalfOpen, ZeroAnchored };

  static Rectangle half_open(double r1, double r2, double s1, double s2);
  static Rectangle zero_anchored(double r2, double s1, double s2);

  Kind kind = Kind::HalfOpen;
  double r1 = 0.0, r2 = 0.0, s1 = 0.0, s2 = 0.0;
};

// Direct multiset count; also recomputes the count as the alternating sum of
// persistent Betti numbers and throws on disagreement (consistency check).
std::int64_t diagram_rectangle_count(const PersistenceDiagram& dgm, int q,
                                     const Rectangle& rect);

// CSV schema: header dim,birth,death,censored; death is decimal or "inf";
// rows sorted by (dim, birth, death).
void write_diagram_csv(const PersistenceDiagram& dgm, std::ostream& out);
PersistenceDiagram read_diagram_csv(std::istream& in, int q_max, double t_max);

}  // namespace kpd
