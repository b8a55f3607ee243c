#include "kpd/complex.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "kpd/detail/format.hpp"
#include "kpd/errors.hpp"
#include "kpd/geometry.hpp"

namespace kpd {

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t cell_key(const std::int64_t* c, int d) {
  std::uint64_t h = 0x2545f4914f6cdd1dull;
  for (int k = 0; k < d; ++k) h = mix64(h ^ static_cast<std::uint64_t>(c[k]));
  return h;
}

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

using BirthMap =
    std::unordered_map<std::vector<std::int32_t>, double, VertexListHash>;

}  // namespace

FilteredComplex::FilteredComplex(MarkedPointSet ground, int q_max, double t_max,
                                 std::vector<Simplex> simplices)
    : ground_(std::move(ground)),
      q_max_(q_max),
      t_max_(t_max),
      simplices_(std::move(simplices)) {}

FilteredComplex build_filtered_complex(const MarkedPointSet& xi,
                                       const FiltrationFunction& kappa,
                                       int q_max, double t_max,
                                       std::size_t budget) {
  if (q_max < 0) throw std::invalid_argument("build: q_max must be >= 0");
  if (!(t_max > 0.0)) throw std::invalid_argument("build: t_max must be > 0");

  const int d = xi.dim();
  const int n = static_cast<int>(xi.size());

  std::vector<Simplex> out;
  auto push = [&](std::vector<std::int32_t> verts, double birth) {
    if (out.size() >= budget)
      throw budget_exceeded("complex: simplex budget exceeded");
    out.push_back({std::move(verts), birth});
  };

  for (std::int32_t i = 0; i < n; ++i) push({i}, 0.0);

  if (q_max == 0 || n < 2) {
    std::sort(out.begin(), out.end(), [](const Simplex& a, const Simplex& b) {
      if (a.birth != b.birth) return a.birth < b.birth;
      if (a.vertices.size() != b.vertices.size())
        return a.vertices.size() < b.vertices.size();
      return a.vertices < b.vertices;
    });
    return FilteredComplex(xi, q_max, t_max, std::move(out));
  }

  // Pair scan over a uniform grid with cell side rho(t_max); the reach bound
  // makes any farther pair necessarily born after t_max.
  const double rho = kappa.rho(t_max);
  const double reach = rho + kEpsOpt;
  const double cell = std::max(rho, 1e-9);

  std::vector<std::int64_t> cells(static_cast<std::size_t>(n) * d);
  std::unordered_map<std::uint64_t, std::vector<std::int32_t>> grid;
  grid.reserve(static_cast<std::size_t>(n) * 2);
  for (std::int32_t i = 0; i < n; ++i) {
    auto p = xi.position(i);
    for (int k = 0; k < d; ++k)
      cells[static_cast<std::size_t>(i) * d + k] =
          static_cast<std::int64_t>(std::floor(p[k] / cell));
    grid[cell_key(&cells[static_cast<std::size_t>(i) * d], d)].push_back(i);
  }

  std::vector<std::vector<std::int32_t>> nbrs_above(n);
  std::unordered_set<std::uint64_t> edge_set;
  BirthMap cur_births;

  std::vector<Simplex> level;  // simplices of the current dimension

  {
    std::int64_t nb[8];
    std::vector<int> delta(d, -1);
    for (std::int32_t i = 0; i < n; ++i) {
      auto pi = xi.position(i);
      std::fill(delta.begin(), delta.end(), -1);
      for (;;) {
        for (int k = 0; k < d; ++k)
          nb[k] = cells[static_cast<std::size_t>(i) * d + k] + delta[k];
        auto it = grid.find(cell_key(nb, d));
        if (it != grid.end()) {
          for (std::int32_t j : it->second) {
            if (j <= i) continue;
            if (dist(pi, xi.position(j)) > reach) continue;
            const std::uint64_t pk =
                (static_cast<std::uint64_t>(i) << 32) |
                static_cast<std::uint32_t>(j);
            if (!edge_set.insert(pk).second) continue;  // hash-collision dup
            const std::int32_t vv[2] = {i, j};
            const double b = kappa.birth(xi, vv);
            if (b <= t_max) {
              nbrs_above[i].push_back(j);
              push({i, j}, b);
              cur_births.emplace(std::vector<std::int32_t>{i, j}, b);
              level.push_back({{i, j}, b});
            } else {
              edge_set.erase(pk);
            }
          }
        }
        int k = 0;
        while (k < d && delta[k] == 1) delta[k++] = -1;
        if (k == d) break;
        ++delta[k];
      }
    }
  }
  for (auto& v : nbrs_above) std::sort(v.begin(), v.end());

  for (int q = 1; q < q_max && !level.empty(); ++q) {
    std::vector<Simplex> next;
    BirthMap next_births;
    std::vector<std::int32_t> cand;
    for (const Simplex& s : level) {
      const std::int32_t m = s.vertices.back();
      for (std::int32_t u : nbrs_above[m]) {
        bool adj = true;
        for (std::size_t a = 0; a + 1 < s.vertices.size() && adj; ++a) {
          const std::uint64_t pk =
              (static_cast<std::uint64_t>(s.vertices[a]) << 32) |
              static_cast<std::uint32_t>(u);
          adj = edge_set.count(pk) != 0;
        }
        if (!adj) continue;
        cand = s.vertices;
        cand.push_back(u);
        // All facets must already be present; their births clamp ours so
        // stored births are monotone under inclusion exactly.
        double maxf = s.birth;
        bool ok = true;
        std::vector<std::int32_t> facet(cand.size() - 1);
        for (std::size_t drop = 0; drop + 1 < cand.size() && ok; ++drop) {
          std::size_t w = 0;
          for (std::size_t a = 0; a < cand.size(); ++a)
            if (a != drop) facet[w++] = cand[a];
          auto it = cur_births.find(facet);
          if (it == cur_births.end())
            ok = false;
          else
            maxf = std::max(maxf, it->second);
        }
        if (!ok) continue;
        const double b = std::max(kappa.birth(xi, cand), maxf);
        if (b <= t_max) {
          push(cand, b);
          next_births.emplace(cand, b);
          next.push_back({cand, b});
        }
      }
    }
    level = std::move(next);
    cur_births = std::move(next_births);
  }

  std::sort(out.begin(), out.end(), [](const Simplex& a, const Simplex& b) {
    if (a.birth != b.birth) return a.birth < b.birth;
    if (a.vertices.size() != b.vertices.size())
      return a.vertices.size() < b.vertices.size();
    return a.vertices < b.vertices;
  });
  return FilteredComplex(xi, q_max, t_max, std::move(out));
}

std::int64_t simplex_count(const FilteredComplex& cx, int q, double t) {
  if (q < 0 || q > cx.q_max())
    throw std::invalid_argument("simplex_count: q outside [0, q_max]");
  if (!(t >= 0.0) || t > cx.t_max())
    throw std::invalid_argument("simplex_count: t outside [0, t_max]");
  std::int64_t c = 0;
  for (const Simplex& s : cx.simplices())
    if (s.dim() == q && s.birth <= t) ++c;
  return c;
}

std::int64_t restrict_complex_counts(const MarkedPointSet& xi,
                                     const Window& region,
                                     const FiltrationFunction& kappa, int q,
                                     double t, std::size_t budget) {
  if (q < 0) throw std::invalid_argument("restrict_complex_counts: q must be >= 0");
  if (!(t >= 0.0))
    throw std::invalid_argument("restrict_complex_counts: t must be >= 0");
  const int d = xi.dim();
  std::vector<double> coords;
  std::vector<Mark> marks;
  for (int i = 0; i < xi.size(); ++i) {
    auto p = xi.position(i);
    if (!region.contains(p)) continue;
    coords.insert(coords.end(), p.begin(), p.end());
    marks.push_back(xi.mark(i));
  }
  if (marks.empty()) return 0;
  MarkedPointSet sub(d, std::move(coords), std::move(marks));
  const double t_max = std::max(t, kTolBisect);
  FilteredComplex cx = build_filtered_complex(sub, kappa, q, t_max, budget);
  return simplex_count(cx, q, std::min(t, t_max));
}

void write_complex_dump(const FilteredComplex& cx, std::ostream& os) {
  for (const Simplex& s : cx.simplices()) {
    os << s.dim() << ',' << detail::fmt_double(s.birth) << ',';
    for (std::size_t a = 0; a < s.vertices.size(); ++a) {
      if (a) os << ' ';
      os << s.vertices[a];
    }
    os << '\n';
  }
}

}  // namespace kpd
