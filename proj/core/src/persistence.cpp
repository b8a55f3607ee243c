#include "kpd/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "kpd/detail/format.hpp"
#include "kpd/errors.hpp"
#include "kpd/geometry.hpp"

namespace kpd {

namespace {

struct VertexListHash {
  std::size_t operator()(const std::vector<std::int32_t>& v) const {
    std::uint64_t h = 1469598103934665603ull;
    for (std::int32_t x : v) {
      h ^= static_cast<std::uint32_t>(x);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

bool pair_less(const PersistencePair& a, const PersistencePair& b) {
  if (a.dim != b.dim) return a.dim < b.dim;
  if (a.birth != b.birth) return a.birth < b.birth;
  return a.death < b.death;
}

void symdiff(std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b,
             std::vector<std::int32_t>& tmp) {
  tmp.clear();
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(tmp));
  a.swap(tmp);
}

// Deaths are exact below t_max; a censored pair only asserts death > t_max.
double effective_death(const PersistencePair& p) {
  return p.censored ? kInf : p.death;
}

// #pairs with birth <= r and death in (s, inf]; s may be +inf (empty set).
std::int64_t beta_upper(const PersistenceDiagram& dgm, int q, double r,
                        double s) {
  std::int64_t c = 0;
  for (const PersistencePair& p : dgm.pairs())
    if (p.dim == q && p.birth <= r && effective_death(p) > s) ++c;
  return c;
}

}  // namespace

PersistenceDiagram::PersistenceDiagram(int q_max, double t_max,
                                       std::vector<PersistencePair> pairs)
    : q_max_(q_max), t_max_(t_max), pairs_(std::move(pairs)) {
  std::sort(pairs_.begin(), pairs_.end(), pair_less);
  for (const PersistencePair& p : pairs_) {
    if (!(p.birth >= 0.0) || !(p.birth < p.death))
      throw std::invalid_argument("diagram: pairs need 0 <= birth < death");
    if (p.dim < 0 || p.dim > q_max_)
      throw std::invalid_argument("diagram: pair dim outside [0, q_max]");
  }
}

PersistenceDiagram reduce(const FilteredComplex& cx) {
  const auto& simp = cx.simplices();
  const std::int32_t m = static_cast<std::int32_t>(simp.size());

  std::unordered_map<std::vector<std::int32_t>, std::int32_t, VertexListHash>
      index;
  index.reserve(simp.size() * 2);
  for (std::int32_t j = 0; j < m; ++j) {
    if (j > 0 && simp[j - 1].birth > simp[j].birth)
      throw std::logic_error("reduce: filtration order violated");
    index.emplace(simp[j].vertices, j);
  }

  std::vector<std::int32_t> low_to_col(m, -1);
  std::vector<std::vector<std::int32_t>> stored(m);
  std::vector<char> negative(m, 0), paired(m, 0);
  std::vector<PersistencePair> pairs;

  std::vector<std::int32_t> col, facet, tmp;
  for (std::int32_t j = 0; j < m; ++j) {
    const Simplex& s = simp[j];
    if (s.dim() == 0) continue;
    col.clear();
    facet.resize(s.vertices.size() - 1);
    for (std::size_t drop = 0; drop < s.vertices.size(); ++drop) {
      std::size_t w = 0;
      for (std::size_t a = 0; a < s.vertices.size(); ++a)
        if (a != drop) facet[w++] = s.vertices[a];
      auto it = index.find(facet);
      if (it == index.end() || it->second >= j)
        throw std::logic_error("reduce: face closure violated");
      col.push_back(it->second);
    }
    std::sort(col.begin(), col.end());

    while (!col.empty()) {
      const std::int32_t low = col.back();
      const std::int32_t k = low_to_col[low];
      if (k < 0) break;
      symdiff(col, stored[k], tmp);
    }
    if (col.empty()) continue;  // positive: creates a class

    const std::int32_t low = col.back();
    low_to_col[low] = j;
    negative[j] = 1;
    paired[low] = 1;
    const double b = simp[low].birth, d = s.birth;
    if (d > b) pairs.push_back({simp[low].dim(), b, d, false});
    stored[j] = std::move(col);
    col.clear();
  }

  for (std::int32_t i = 0; i < m; ++i)
    if (!negative[i] && !paired[i])
      pairs.push_back({simp[i].dim(), simp[i].birth, kInf, true});

  return PersistenceDiagram(cx.q_max(), cx.t_max(), std::move(pairs));
}

std::int64_t persistent_betti(const PersistenceDiagram& dgm, int q, double r,
                              double s) {
  if (q < 0 || q > dgm.q_max())
    throw std::invalid_argument("persistent_betti: q outside [0, q_max]");
  if (!(r >= 0.0) || !(r <= s))
    throw std::invalid_argument("persistent_betti: needs 0 <= r <= s");
  if (!(s < dgm.t_max()))
    throw std::invalid_argument(
        "persistent_betti: s must be below t_max (censoring)");
  return beta_upper(dgm, q, r, s);
}

namespace {

void check_rectangle(double r1, double r2, double s1, double s2) {
  if (!(r1 >= 0.0) || !(r1 <= r2))
    throw std::invalid_argument("rectangle: needs 0 <= r1 <= r2");
  if (!(r2 <= s1)) throw std::invalid_argument("rectangle: needs r2 <= s1");
  if (!(s1 <= s2)) throw std::invalid_argument("rectangle: needs s1 <= s2");
}

}  // namespace

Rectangle Rectangle::half_open(double r1, double r2, double s1, double s2) {
  check_rectangle(r1, r2, s1, s2);
  Rectangle rc;
  rc.kind = Kind::HalfOpen;
  rc.r1 = r1;
  rc.r2 = r2;
  rc.s1 = s1;
  rc.s2 = s2;
  return rc;
}

Rectangle Rectangle::zero_anchored(double r2, double s1, double s2) {
  check_rectangle(0.0, r2, s1, s2);
  Rectangle rc;
  rc.kind = Kind::ZeroAnchored;
  rc.r1 = 0.0;
  rc.r2 = r2;
  rc.s1 = s1;
  rc.s2 = s2;
  return rc;
}

std::int64_t diagram_rectangle_count(const PersistenceDiagram& dgm, int q,
                                     const Rectangle& rect) {
  if (q < 0 || q > dgm.q_max())
    throw std::invalid_argument("rectangle_count: q outside [0, q_max]");
  const bool anchored = rect.kind == Rectangle::Kind::ZeroAnchored;
  const double r1 = anchored ? 0.0 : rect.r1;
  if (!(r1 >= 0.0) || !(r1 <= rect.r2))
    throw std::invalid_argument("rectangle_count: needs 0 <= r1 <= r2");
  if (!(rect.r2 <= rect.s1))
    throw std::invalid_argument("rectangle_count: needs r2 <= s1 (inside x < y)");
  if (!(rect.s1 <= rect.s2))
    throw std::invalid_argument("rectangle_count: needs s1 <= s2");
  if (rect.s2 > dgm.t_max() && rect.s2 != kInf)
    throw std::invalid_argument(
        "rectangle_count: s2 must be <= t_max or +inf (censoring)");

  std::int64_t direct = 0;
  for (const PersistencePair& p : dgm.pairs()) {
    if (p.dim != q) continue;
    const double de = effective_death(p);
    const bool birth_in = p.birth <= rect.r2 && (anchored || p.birth > r1);
    const bool death_in = de > rect.s1 && de <= rect.s2;
    if (birth_in && death_in) ++direct;
  }

  std::int64_t alt = beta_upper(dgm, q, rect.r2, rect.s1) -
                     beta_upper(dgm, q, rect.r2, rect.s2);
  if (!anchored)
    alt += beta_upper(dgm, q, r1, rect.s2) - beta_upper(dgm, q, r1, rect.s1);
  if (alt != direct)
    throw std::logic_error("rectangle_count: alternating-sum mismatch");
  return direct;
}

void write_diagram_csv(const PersistenceDiagram& dgm, std::ostream& out) {
  out << "dim,birth,death,censored\n";
  for (const PersistencePair& p : dgm.pairs())
    out << p.dim << ',' << detail::fmt_double(p.birth) << ','
        << detail::fmt_double(p.death) << ',' << (p.censored ? 1 : 0) << '\n';
}

PersistenceDiagram read_diagram_csv(std::istream& in, int q_max, double t_max) {
  std::string line;
  if (!std::getline(in, line) || line != "dim,birth,death,censored")
    throw std::runtime_error("diagram csv: line 1: bad header");
  std::vector<PersistencePair> pairs;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string f0, f1, f2, f3;
    if (!std::getline(ss, f0, ',') || !std::getline(ss, f1, ',') ||
        !std::getline(ss, f2, ',') || !std::getline(ss, f3))
      throw std::runtime_error("diagram csv: line " + std::to_string(lineno) +
                               ": expected 4 fields");
    PersistencePair p;
    try {
      p.dim = std::stoi(f0);
      p.birth = detail::parse_double(f1);
      p.death = detail::parse_double(f2);
      p.censored = std::stoi(f3) != 0;
    } catch (const std::exception&) {
      throw std::runtime_error("diagram csv: line " + std::to_string(lineno) +
                               ": bad field");
    }
    pairs.push_back(p);
  }
  return PersistenceDiagram(q_max, t_max, std::move(pairs));
}

}  // namespace kpd
