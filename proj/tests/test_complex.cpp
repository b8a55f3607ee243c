#include <algorithm>
#include <map>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "kpd/complex.hpp"
#include "kpd/errors.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace kpd;
using namespace kpd::testsupport;

namespace {

// Exhaustive reference builder: every subset up to q_max + 1 vertices,
// births clamped by faces, filtered by t_max.
std::map<std::vector<std::int32_t>, double> brute_complex(
    const MarkedPointSet& set, const FiltrationFunction& kappa, int q_max,
    double t_max) {
  const int n = set.size();
  std::map<std::vector<std::int32_t>, double> birth;
  for (std::uint32_t bits = 1; bits < (1u << n); ++bits) {
    if (__builtin_popcount(bits) > q_max + 1) continue;
    std::vector<std::int32_t> v;
    for (int i = 0; i < n; ++i)
      if (bits & (1u << i)) v.push_back(i);
    double b = kappa.birth(set, v);
    if (v.size() > 1) {
      for (std::size_t drop = 0; drop < v.size(); ++drop) {
        std::vector<std::int32_t> facet;
        for (std::size_t k = 0; k < v.size(); ++k)
          if (k != drop) facet.push_back(v[k]);
        b = std::max(b, birth.at(facet));
      }
    }
    birth[v] = b;
  }
  std::map<std::vector<std::int32_t>, double> kept;
  for (auto& [v, b] : birth)
    if (b <= t_max) kept[v] = b;
  return kept;
}

}  // namespace

TEST_CASE("unit square complex: contents and order") {
  const MarkedPointSet set = unit_square_set();
  const FiltrationFunction kappa = unit_square_kappa();
  const FilteredComplex cx = build_filtered_complex(set, kappa, 2, 1.0);

  REQUIRE(cx.size() == 14);
  CHECK(simplex_count(cx, 0, 1.0) == 4);
  CHECK(simplex_count(cx, 1, 1.0) == 6);
  CHECK(simplex_count(cx, 2, 1.0) == 4);
  CHECK(simplex_count(cx, 1, 0.5) == 4);
  CHECK(simplex_count(cx, 1, 0.4999) == 0);
  CHECK(simplex_count(cx, 2, 0.7) == 0);

  const double hd = half_diag();
  for (const Simplex& s : cx.simplices()) {
    if (s.dim() == 0) CHECK(s.birth == 0.0);
    if (s.dim() == 2) CHECK(s.birth == doctest::Approx(hd).epsilon(1e-12));
  }

  // Sorted by (birth, dim, lex), so faces precede cofaces.
  for (std::size_t i = 1; i < cx.size(); ++i) {
    const Simplex& a = cx.simplices()[i - 1];
    const Simplex& b = cx.simplices()[i];
    CHECK((a.birth < b.birth ||
           (a.birth == b.birth &&
            (a.dim() < b.dim() ||
             (a.dim() == b.dim() && a.vertices < b.vertices)))));
  }
}

TEST_CASE("builder matches the exhaustive reference") {
  const FiltrationFunction kinds[] = {FiltrationFunction::cech_radii(0.3),
                                      FiltrationFunction::rips_radii(0.3)};
  Rng rng(201);
  for (const FiltrationFunction& kappa : kinds) {
    for (int it = 0; it < 12; ++it) {
      const int n = 4 + static_cast<int>(rng.uniform() * 5.0);
      const MarkedPointSet set = random_radii_set(rng, n, 2, 0.3, 1.2);
      const int q_max = 3;
      const double t_max = 0.6;
      const auto expected = brute_complex(set, kappa, q_max, t_max);
      const FilteredComplex cx =
          build_filtered_complex(set, kappa, q_max, t_max);
      REQUIRE(cx.size() == expected.size());
      for (const Simplex& s : cx.simplices()) {
        auto itx = expected.find(s.vertices);
        REQUIRE(itx != expected.end());
        CHECK(s.birth == doctest::Approx(itx->second).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("births are monotone along faces as stored") {
  Rng rng(202);
  const FiltrationFunction kappa = FiltrationFunction::cech_radii(0.4);
  const MarkedPointSet set = random_radii_set(rng, 14, 2, 0.4, 1.5);
  const FilteredComplex cx = build_filtered_complex(set, kappa, 3, 0.8);
  std::map<std::vector<std::int32_t>, double> birth;
  for (const Simplex& s : cx.simplices()) birth[s.vertices] = s.birth;
  for (const Simplex& s : cx.simplices()) {
    if (s.dim() == 0) continue;
    for (std::size_t drop = 0; drop < s.vertices.size(); ++drop) {
      std::vector<std::int32_t> facet;
      for (std::size_t k = 0; k < s.vertices.size(); ++k)
        if (k != drop) facet.push_back(s.vertices[k]);
      auto itf = birth.find(facet);
      REQUIRE(itf != birth.end());
      CHECK(itf->second <= s.birth);  // exact, clamped at build time
    }
  }
}

TEST_CASE("budget exhaustion throws") {
  Rng rng(203);
  const MarkedPointSet set = random_radii_set(rng, 12, 2, 0.3, 0.8);
  const FiltrationFunction kappa = FiltrationFunction::cech_radii(0.3);
  CHECK_THROWS_AS(build_filtered_complex(set, kappa, 3, 0.8, 20),
                  budget_exceeded);
  // A generous budget leaves the result identical to no budget.
  const FilteredComplex a = build_filtered_complex(set, kappa, 2, 0.5);
  const FilteredComplex b =
      build_filtered_complex(set, kappa, 2, 0.5, 1000000);
  CHECK(a.size() == b.size());
}

TEST_CASE("count queries validate their range") {
  const FilteredComplex cx =
      build_filtered_complex(unit_square_set(), unit_square_kappa(), 2, 1.0);
  CHECK_THROWS_AS(simplex_count(cx, 3, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(simplex_count(cx, 0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(simplex_count(cx, -1, 0.5), std::invalid_argument);
}

TEST_CASE("restricted counts see only the region") {
  const MarkedPointSet set = unit_square_set();
  const FiltrationFunction kappa = unit_square_kappa();
  // A box holding the two left corners only: one edge at distance 1.
  const Window region = Window::box({-0.25, -0.25}, {0.5, 1.25});
  CHECK(restrict_complex_counts(set, region, kappa, 0, 1.0) == 2);
  CHECK(restrict_complex_counts(set, region, kappa, 1, 1.0) == 1);
  CHECK(restrict_complex_counts(set, region, kappa, 1, 0.4) == 0);
  // The whole square region reproduces the global counts.
  const Window all = Window::box({-1.0, -1.0}, {2.0, 2.0});
  CHECK(restrict_complex_counts(set, all, kappa, 2, 1.0) == 4);
}

TEST_CASE("complex dump schema") {
  const FilteredComplex cx =
      build_filtered_complex(unit_square_set(), unit_square_kappa(), 1, 0.6);
  std::ostringstream os;
  write_complex_dump(cx, os);
  std::istringstream is(os.str());
  std::string line;
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    CHECK(line.find(',') != std::string::npos);
  }
  CHECK(rows == cx.size());
}
