#include <benchmark/benchmark.h>

#include <vector>

#include "kpd/complex.hpp"
#include "kpd/kappa.hpp"
#include "kpd/marks.hpp"
#include "kpd/persistence.hpp"
#include "kpd/point_set.hpp"
#include "kpd/rng.hpp"

namespace {

kpd::MarkedPointSet random_radii_cloud(int n, int d, double cap, kpd::Rng& rng) {
  std::vector<double> coords(static_cast<std::size_t>(n) * d);
  std::vector<kpd::Mark> marks;
  marks.reserve(n);
  for (double& x : coords) x = rng.uniform(-2.0, 2.0);
  for (int i = 0; i < n; ++i)
    marks.push_back(kpd::RadiusMark{rng.uniform(0.0, cap)});
  return kpd::MarkedPointSet(d, std::move(coords), std::move(marks));
}

void bm_birth_triple_radii(benchmark::State& state) {
  kpd::Rng rng(1);
  const kpd::MarkedPointSet set = random_radii_cloud(3, 2, 0.5, rng);
  const kpd::FiltrationFunction kappa = kpd::FiltrationFunction::cech_radii(0.5);
  const std::int32_t ids[] = {0, 1, 2};
  for (auto _ : state)
    benchmark::DoNotOptimize(kappa.birth(set, {ids, 3}));
}
BENCHMARK(bm_birth_triple_radii);

void bm_birth_triple_shape(benchmark::State& state) {
  kpd::Rng rng(2);
  const std::vector<kpd::Shape> fam = {kpd::Shape::box({0.7, 0.5}),
                                       kpd::Shape::l1(0.8)};
  std::vector<double> coords(6);
  for (double& x : coords) x = rng.uniform(-1.0, 1.0);
  const kpd::MarkedPointSet set(
      2, std::move(coords),
      {kpd::ShapeMark{0}, kpd::ShapeMark{1}, kpd::ShapeMark{0}});
  const kpd::FiltrationFunction kappa = kpd::FiltrationFunction::cech_shape(fam);
  const std::int32_t ids[] = {0, 1, 2};
  for (auto _ : state)
    benchmark::DoNotOptimize(kappa.birth(set, {ids, 3}));
}
BENCHMARK(bm_birth_triple_shape);

void bm_build_complex(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  kpd::Rng rng(3);
  const kpd::MarkedPointSet set = random_radii_cloud(n, 2, 0.3, rng);
  const kpd::FiltrationFunction kappa = kpd::FiltrationFunction::cech_radii(0.3);
  for (auto _ : state) {
    const kpd::FilteredComplex cx =
        kpd::build_filtered_complex(set, kappa, 2, 0.6);
    benchmark::DoNotOptimize(cx.size());
  }
}
BENCHMARK(bm_build_complex)->Arg(50)->Arg(100)->Arg(200);

void bm_reduce(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  kpd::Rng rng(4);
  const kpd::MarkedPointSet set = random_radii_cloud(n, 2, 0.3, rng);
  const kpd::FiltrationFunction kappa = kpd::FiltrationFunction::cech_radii(0.3);
  const kpd::FilteredComplex cx = kpd::build_filtered_complex(set, kappa, 2, 0.6);
  for (auto _ : state) {
    const kpd::PersistenceDiagram dgm = kpd::reduce(cx);
    benchmark::DoNotOptimize(dgm.pairs().size());
  }
}
BENCHMARK(bm_reduce)->Arg(50)->Arg(100)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
