#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "kpd/betti_oracle.hpp"
#include "kpd/complex.hpp"
#include "kpd/persistence.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace kpd;
using namespace kpd::testsupport;

TEST_CASE("unit square diagram") {
  const FilteredComplex cx =
      build_filtered_complex(unit_square_set(), unit_square_kappa(), 2, 1.0);
  const PersistenceDiagram dgm = reduce(cx);
  const double hd = half_diag();

  REQUIRE(dgm.pairs().size() == 6);
  int h0_finite = 0, h0_essential = 0, h1 = 0, h2 = 0;
  for (const PersistencePair& p : dgm.pairs()) {
    if (p.dim == 0 && !p.censored) {
      CHECK(p.birth == 0.0);
      CHECK(p.death == doctest::Approx(0.5).epsilon(1e-12));
      ++h0_finite;
    } else if (p.dim == 0) {
      CHECK(p.birth == 0.0);
      CHECK(p.death == kInf);
      ++h0_essential;
    } else if (p.dim == 1) {
      CHECK(p.birth == doctest::Approx(0.5).epsilon(1e-12));
      CHECK(p.death == doctest::Approx(hd).epsilon(1e-12));
      CHECK(!p.censored);
      ++h1;
    } else {
      CHECK(p.dim == 2);
      CHECK(p.birth == doctest::Approx(hd).epsilon(1e-12));
      CHECK(p.death == kInf);
      CHECK(p.censored);
      ++h2;
    }
  }
  CHECK(h0_finite == 3);
  CHECK(h0_essential == 1);
  CHECK(h1 == 1);
  CHECK(h2 == 1);
}

TEST_CASE("persistent betti on the unit square") {
  const FilteredComplex cx =
      build_filtered_complex(unit_square_set(), unit_square_kappa(), 2, 1.0);
  const PersistenceDiagram dgm = reduce(cx);

  CHECK(persistent_betti(dgm, 0, 0.0, 0.25) == 4);
  CHECK(persistent_betti(dgm, 0, 0.0, 0.5) == 1);
  CHECK(persistent_betti(dgm, 1, 0.5, 0.6) == 1);
  CHECK(persistent_betti(dgm, 1, 0.6, 0.71) == 0);
  CHECK(persistent_betti(dgm, 2, 0.71, 0.99) == 1);
  CHECK_THROWS_AS(persistent_betti(dgm, 0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(persistent_betti(dgm, 0, 0.5, 0.25), std::invalid_argument);
  CHECK_THROWS_AS(persistent_betti(dgm, 3, 0.0, 0.5), std::invalid_argument);
}

TEST_CASE("reduction equals the rank oracle on random complexes") {
  const FiltrationFunction kinds[] = {FiltrationFunction::cech_radii(0.3),
                                      FiltrationFunction::rips_radii(0.3)};
  Rng rng(301);
  const double grid[] = {0.05, 0.15, 0.25, 0.35, 0.45};
  for (const FiltrationFunction& kappa : kinds) {
    for (int it = 0; it < 10; ++it) {
      const int n = 5 + static_cast<int>(rng.uniform() * 5.0);
      const MarkedPointSet set = random_radii_set(rng, n, 2, 0.3, 1.2);
      const FilteredComplex cx = build_filtered_complex(set, kappa, 2, 0.5);
      const PersistenceDiagram dgm = reduce(cx);
      for (int q = 0; q <= 1; ++q)
        for (double r : grid)
          for (double s : grid) {
            if (r > s) continue;
            CHECK(persistent_betti(dgm, q, r, s) ==
                  persistent_betti_oracle(cx, q, r, s));
          }
    }
  }
}

TEST_CASE("rectangle counts, handcrafted diagram") {
  const PersistenceDiagram dgm(
      1, 1.0,
      {{0, 0.0, 0.4, false}, {0, 0.1, 0.6, false}, {0, 0.2, kInf, true}});

  // (0.5, 1] excludes the censored class: its death lies beyond t_max = 1.
  CHECK(diagram_rectangle_count(
            dgm, 0, Rectangle::zero_anchored(0.25, 0.5, 1.0)) == 1);
  // (0.5, inf] includes it.
  CHECK(diagram_rectangle_count(
            dgm, 0, Rectangle::zero_anchored(0.25, 0.5, kInf)) == 2);
  // Births in (0.05, 0.25].
  CHECK(diagram_rectangle_count(
            dgm, 0, Rectangle::half_open(0.05, 0.25, 0.5, kInf)) == 2);
  CHECK(diagram_rectangle_count(
            dgm, 0, Rectangle::half_open(0.05, 0.15, 0.3, 0.5)) == 0);
  // Death interval (0.3, 0.5] catches only the first class.
  CHECK(diagram_rectangle_count(
            dgm, 0, Rectangle::zero_anchored(0.25, 0.3, 0.5)) == 1);

  CHECK_THROWS_AS(Rectangle::half_open(0.3, 0.2, 0.5, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(Rectangle::zero_anchored(0.6, 0.5, 1.0),
                  std::invalid_argument);
  // s2 strictly between s1 and t_max is decidable; beyond t_max it is not.
  CHECK_THROWS_AS(diagram_rectangle_count(
                      dgm, 0, Rectangle::zero_anchored(0.25, 0.5, 1.5)),
                  std::invalid_argument);
}

TEST_CASE("rectangle identity against the filtration, randomized") {
  // diagram_rectangle_count internally recomputes every count as the
  // alternating persistent-Betti sum and throws on mismatch, so this fuzz
  // fails loudly if the identity breaks.
  Rng rng(302);
  const FiltrationFunction kappa = FiltrationFunction::cech_radii(0.3);
  for (int it = 0; it < 15; ++it) {
    const int n = 6 + static_cast<int>(rng.uniform() * 6.0);
    const MarkedPointSet set = random_radii_set(rng, n, 2, 0.3, 1.2);
    const PersistenceDiagram dgm =
        reduce(build_filtered_complex(set, kappa, 2, 0.5));
    for (int rep = 0; rep < 40; ++rep) {
      double a = rng.uniform(0.0, 0.5), b = rng.uniform(0.0, 0.5);
      double c = rng.uniform(0.0, 0.5), e = rng.uniform(0.0, 0.5);
      double r1 = std::min(a, b), r2 = std::max(a, b);
      double s1 = std::min(c, e), s2 = std::max(c, e);
      if (r2 > s1) continue;
      if (rng.uniform() < 0.25) s2 = kInf;
      const int q = rng.uniform() < 0.5 ? 0 : 1;
      const Rectangle rect = rng.uniform() < 0.5
                                 ? Rectangle::half_open(r1, r2, s1, s2)
                                 : Rectangle::zero_anchored(r2, s1, s2);
      CHECK(diagram_rectangle_count(dgm, q, rect) >= 0);
    }
  }
}

TEST_CASE("diagram validation") {
  CHECK_THROWS_AS(PersistenceDiagram(1, 1.0, {{0, 0.5, 0.5, false}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(PersistenceDiagram(1, 1.0, {{0, -0.1, 0.5, false}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(PersistenceDiagram(1, 1.0, {{2, 0.1, 0.5, false}}),
                  std::invalid_argument);
}

TEST_CASE("diagram csv round trip") {
  const FilteredComplex cx =
      build_filtered_complex(unit_square_set(), unit_square_kappa(), 2, 1.0);
  const PersistenceDiagram dgm = reduce(cx);
  std::ostringstream os;
  write_diagram_csv(dgm, os);
  CHECK(os.str().find("inf") != std::string::npos);

  std::istringstream is(os.str());
  const PersistenceDiagram back = read_diagram_csv(is, 2, 1.0);
  REQUIRE(back.pairs().size() == dgm.pairs().size());
  for (std::size_t i = 0; i < dgm.pairs().size(); ++i) {
    CHECK(back.pairs()[i].birth == dgm.pairs()[i].birth);  // lossless
    CHECK(back.pairs()[i].death == dgm.pairs()[i].death);
    CHECK(back.pairs()[i].censored == dgm.pairs()[i].censored);
  }
  std::ostringstream os2;
  write_diagram_csv(back, os2);
  CHECK(os.str() == os2.str());

  std::istringstream bad("dim,birth,death,censored\n0,x,1,0\n");
  CHECK_THROWS_WITH_AS(read_diagram_csv(bad, 1, 1.0),
                       doctest::Contains("line 2"), std::runtime_error);
}
