#include <cmath>
#include <sstream>

#include "doctest.h"
#include "kpd/errors.hpp"
#include "kpd/geometry.hpp"
#include "kpd/marks.hpp"
#include "kpd/point_set.hpp"

using namespace kpd;

TEST_CASE("growth function values and sups") {
  const GrowthFunction lin = GrowthFunction::linear(2.0);
  CHECK(lin.value(0.0) == 0.0);
  CHECK(lin.value(1.5) == 3.0);
  CHECK(lin.sup() == kInf);

  const GrowthFunction aff = GrowthFunction::affine(0.5, 1.0);
  CHECK(aff.value(0.0) == 0.5);
  CHECK(aff.value(2.0) == 2.5);

  const GrowthFunction pow_ = GrowthFunction::power(1.0, 2.0);
  CHECK(pow_.value(3.0) == 9.0);

  const GrowthFunction sat = GrowthFunction::exp_saturating(2.0, 1.0);
  CHECK(sat.value(0.0) == 0.0);
  CHECK(sat.sup() == 2.0);
  CHECK(sat.value(5.0) < 2.0);
  CHECK(sat.value(50.0) <= 2.0);

  CHECK_THROWS_AS(GrowthFunction::linear(0.0), std::invalid_argument);
  CHECK_THROWS_AS(GrowthFunction::power(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("growth inverse is a generalized inverse") {
  const GrowthFunction cases[] = {
      GrowthFunction::linear(0.7), GrowthFunction::affine(0.2, 1.3),
      GrowthFunction::power(0.9, 1.7), GrowthFunction::exp_saturating(1.5, 0.8)};
  for (const auto& g : cases) {
    for (double y : {0.0, 0.1, 0.5, 1.0, 1.4}) {
      const double t = g.inverse(y);
      if (t == kInf) {
        CHECK(y >= g.sup());
        continue;
      }
      CHECK(g.value(t) >= y - 1e-9);
      if (t > 1e-9) CHECK(g.value(t - 1e-9) <= y + 1e-6);
    }
    CHECK(g.inverse(0.0) == 0.0);
  }
  // The sup itself is never attained by a saturating function.
  CHECK(GrowthFunction::exp_saturating(1.0, 1.0).inverse(1.0) == kInf);
  CHECK(GrowthFunction::exp_saturating(1.0, 1.0).inverse(2.0) == kInf);
}

TEST_CASE("sum inverse solves f(t) + g(t) = y") {
  const GrowthFunction f = GrowthFunction::linear(1.0);
  const GrowthFunction g = GrowthFunction::linear(3.0);
  CHECK(sum_inverse(f, g, 8.0) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(sum_inverse(f, g, 0.0) == 0.0);

  const GrowthFunction a = GrowthFunction::affine(0.5, 1.0);
  CHECK(sum_inverse(a, a, 0.9) == 0.0);  // already covered at t = 0

  const GrowthFunction s = GrowthFunction::exp_saturating(1.0, 2.0);
  CHECK(sum_inverse(s, s, 2.5) == kInf);  // combined sup is 2
}

TEST_CASE("shape gauges") {
  const Shape box = Shape::box({1.0, 2.0});
  const double z1[] = {2.0, 2.0};
  CHECK(box.gauge({z1, 2}) == doctest::Approx(2.0));
  const double z2[] = {0.5, 2.0};
  CHECK(box.gauge({z2, 2}) == doctest::Approx(1.0));
  CHECK(box.diameter() == doctest::Approx(2.0 * std::sqrt(5.0)));

  const Shape ball = Shape::ball(2.0);
  const double z3[] = {3.0, 4.0};
  CHECK(ball.gauge({z3, 2}) == doctest::Approx(2.5));
  CHECK(ball.diameter() == doctest::Approx(4.0));

  const Shape l1 = Shape::l1(0.5);
  const double z4[] = {0.25, -0.25};
  CHECK(l1.gauge({z4, 2}) == doctest::Approx(1.0));
  CHECK(l1.diameter() == doctest::Approx(1.0));

  CHECK_THROWS_AS(Shape::ball(0.0), std::invalid_argument);
  CHECK_THROWS_AS(Shape::box({1.0, -1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Shape::box({1.0}).validate_dim(2), config_error);
}

TEST_CASE("marks round-trip through their numeric payload") {
  const Mark r = make_mark(MarkKind::Radius, 0.25);
  CHECK(mark_kind(r) == MarkKind::Radius);
  CHECK(mark_value(r) == 0.25);
  const Mark g = make_mark(MarkKind::Growth, 2.0);
  CHECK(std::get<GrowthMark>(g).id == 2);
  const Mark b = make_mark(MarkKind::Binary, 1.0);
  CHECK(std::get<BinaryMark>(b).value == 1);
  CHECK(mark_kind_name(MarkKind::Shape) == "shape");
  CHECK_THROWS_AS(make_mark(MarkKind::Radius, -0.5), std::invalid_argument);
}

TEST_CASE("point set simplicity") {
  std::vector<double> coords = {0.0, 0.0, 1.0, 0.0, 0.0, 0.0};
  std::vector<Mark> marks(3, RadiusMark{0.0});
  CHECK_THROWS_AS(MarkedPointSet(2, coords, marks), simplicity_error);

  MarkedPointSet ok(2, {0.0, 0.0, 1.0, 0.0}, {RadiusMark{0.1}, RadiusMark{0.2}});
  CHECK(ok.size() == 2);
  CHECK(ok.position(1)[0] == 1.0);
}

TEST_CASE("points csv round trip") {
  MarkedPointSet set(2);
  const double p0[] = {0.0, 0.25};
  const double p1[] = {1.0 / 3.0, -2.0};
  set.add({p0, 2}, RadiusMark{0.125});
  set.add({p1, 2}, BinaryMark{1});

  std::ostringstream os;
  write_points_csv(set, os);
  std::istringstream is(os.str());
  const MarkedPointSet back = read_points_csv(is);
  REQUIRE(back.size() == 2);
  CHECK(back.dim() == 2);
  CHECK(back.position(1)[0] == 1.0 / 3.0);  // %.17g is lossless
  CHECK(mark_kind(back.mark(0)) == MarkKind::Radius);
  CHECK(mark_value(back.mark(1)) == 1.0);

  std::ostringstream os2;
  write_points_csv(back, os2);
  CHECK(os.str() == os2.str());
}

TEST_CASE("points csv errors name the line") {
  std::istringstream bad_header("a,b\n");
  CHECK_THROWS_WITH_AS(read_points_csv(bad_header),
                       doctest::Contains("line 1"), std::runtime_error);

  std::istringstream bad_row("x1,x2,mark_kind,mark_value\n1,2,radius,oops\n");
  CHECK_THROWS_WITH_AS(read_points_csv(bad_row), doctest::Contains("line 2"),
                       std::runtime_error);

  std::istringstream dup(
      "x1,x2,mark_kind,mark_value\n1,2,radius,0\n1,2,radius,0\n");
  CHECK_THROWS_AS(read_points_csv(dup), simplicity_error);
}
