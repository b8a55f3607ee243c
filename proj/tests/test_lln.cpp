#include <cmath>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "kpd/errors.hpp"
#include "kpd/lln.hpp"

using namespace kpd;

namespace {

ProcessSpec radii_process(double intensity, double hi, std::uint64_t seed) {
  ProcessSpec spec;
  spec.intensity = intensity;
  spec.marking.kind = Marking::Kind::IID;
  spec.marking.mark = MarkDistribution::radius_uniform(0.0, hi);
  spec.seed = seed;
  return spec;
}

QuerySet small_queries() {
  QuerySet qs;
  qs.grid.push_back({0, 0.1, 0.3});
  qs.rectangles.emplace_back(0, Rectangle::zero_anchored(0.1, 0.2, 0.4));
  return qs;
}

std::string rows_csv(const ConvergenceReport& r) {
  std::ostringstream os;
  write_report_rows_csv(r, os);
  return os.str();
}

std::string aggregates_csv(const ConvergenceReport& r) {
  std::ostringstream os;
  write_report_aggregates_csv(r, os);
  return os.str();
}

}  // namespace

TEST_CASE("seeds experiment: shape, normalization, determinism") {
  const ProcessSpec spec = radii_process(1.5, 0.2, 11);
  const AveragingNet net({Window::cube(1, 6.0), Window::cube(1, 10.0)});
  const FiltrationFunction kappa = FiltrationFunction::cech_radii(0.2);

  LlnOptions options;
  options.q_max = 1;
  options.t_max = 0.5;
  options.jobs = 1;
  options.seeds = 3;

  const ConvergenceReport report =
      run_lln_experiment(spec, net, kappa, small_queries(), options);

  CHECK(report.tasks == 6);
  CHECK(report.skips.empty());
  REQUIRE(report.rows.size() == 12);  // 2 windows x 3 seeds x 2 queries
  for (const ReportRow& row : report.rows) {
    CHECK((row.kind == "betti" || row.kind == "xi0"));
    CHECK(row.normalized == row.value / row.volume);
    CHECK((row.window_label == "cube_6" || row.window_label == "cube_10"));
  }

  REQUIRE(report.aggregates.size() == 4);
  // First-window aggregates carry no delta; the second window's do.
  int with_delta = 0;
  for (const AggregateRow& a : report.aggregates) {
    CHECK(a.n == 3);
    CHECK(std::isfinite(a.mean));
    CHECK(std::isfinite(a.stderr_));
    if (!std::isnan(a.delta_prev)) ++with_delta;
  }
  CHECK(with_delta == 2);

  // Mean equals the average of the matching rows.
  for (const AggregateRow& a : report.aggregates) {
    double sum = 0.0;
    int n = 0;
    for (const ReportRow& row : report.rows) {
      if (row.window_label == a.window_label && row.kind == a.kind &&
          row.q == a.q && row.r2 == a.r2 && row.s1 == a.s1) {
        sum += row.normalized;
        ++n;
      }
    }
    CHECK(n == 3);
    CHECK(a.mean == doctest::Approx(sum / 3.0).epsilon(1e-15));
  }

  // Rerun: byte-identical CSV and JSON.
  const ConvergenceReport again =
      run_lln_experiment(spec, net, kappa, small_queries(), options);
  CHECK(rows_csv(report) == rows_csv(again));
  CHECK(aggregates_csv(report) == aggregates_csv(again));
  CHECK(report_json(report) == report_json(again));

  // Thread count must not change the result.
  LlnOptions threaded = options;
  threaded.jobs = 3;
  const ConvergenceReport parallel =
      run_lln_experiment(spec, net, kappa, small_queries(), threaded);
  CHECK(rows_csv(report) == rows_csv(parallel));
  CHECK(report_json(report) == report_json(parallel));
}

TEST_CASE("single seed leaves stderr empty") {
  const ProcessSpec spec = radii_process(1.0, 0.2, 3);
  const AveragingNet net({Window::cube(1, 8.0)});
  const FiltrationFunction kappa = FiltrationFunction::cech_radii(0.2);
  LlnOptions options;
  options.q_max = 1;
  options.t_max = 0.5;
  options.seeds = 1;

  QuerySet qs;
  qs.grid.push_back({0, 0.1, 0.3});
  const ConvergenceReport report =
      run_lln_experiment(spec, net, kappa, qs, options);
  REQUIRE(report.aggregates.size() == 1);
  CHECK(report.aggregates[0].n == 1);
  CHECK(std::isnan(report.aggregates[0].stderr_));
  CHECK(std::isnan(report.aggregates[0].delta_prev));

  // NaN renders as an empty CSV field: ...,mean,,,1
  const std::string csv = aggregates_csv(report);
  const std::string tail = ",,,1\n";
  CHECK(csv.find(tail) != std::string::npos);
}

TEST_CASE("budget skips are recorded and excluded") {
  const ProcessSpec spec = radii_process(5.0, 0.2, 4);
  const AveragingNet net({Window::cube(1, 6.0)});
  const FiltrationFunction kappa = FiltrationFunction::cech_radii(0.2);
  LlnOptions options;
  options.q_max = 1;
  options.t_max = 0.5;
  options.seeds = 2;
  options.budget = 1;

  const ConvergenceReport report =
      run_lln_experiment(spec, net, kappa, small_queries(), options);
  CHECK(report.tasks == 2);
  CHECK(report.skips.size() == 2);
  CHECK(report.rows.empty());
  for (const SkipRecord& s : report.skips)
    CHECK(s.reason.find("budget") != std::string::npos);
  for (const AggregateRow& a : report.aggregates) {
    CHECK(a.n == 0);
    CHECK(std::isnan(a.mean));
  }

  std::ostringstream os;
  write_report_skips_csv(report, os);
  CHECK(os.str().rfind("window_label,seed,reason\n", 0) == 0);
  CHECK(os.str().find("cube_6") != std::string::npos);
}

TEST_CASE("injected diagram source feeds the queries") {
  const ProcessSpec spec = radii_process(1.0, 0.2, 5);
  const AveragingNet net({Window::cube(1, 6.0)});
  const FiltrationFunction kappa = FiltrationFunction::cech_radii(0.2);
  LlnOptions options;
  options.q_max = 1;
  options.t_max = 0.5;
  options.seeds = 2;

  // Two classes surviving past s = 0.3 born before r = 0.1.
  const PersistenceDiagram fixed(
      1, 0.5, {{0, 0.0, 0.45, false}, {0, 0.05, kInf, true}});
  int calls = 0;
  DiagramSource source = [&](std::size_t, const Window&, std::uint64_t si) {
    ++calls;
    if (si == 1) throw budget_exceeded("synthetic skip");
    return fixed;
  };

  QuerySet qs;
  qs.grid.push_back({0, 0.1, 0.3});
  const ConvergenceReport report =
      run_lln_experiment(spec, net, kappa, qs, options, source);
  CHECK(calls == 2);
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows[0].value == 2.0);
  CHECK(report.rows[0].seed == 0);
  REQUIRE(report.skips.size() == 1);
  CHECK(report.skips[0].seed == 1);
  CHECK(report.skips[0].reason == "synthetic skip");
}

TEST_CASE("lattice averaging over inner cells") {
  const ProcessSpec spec = radii_process(2.0, 0.2, 6);
  const AveragingNet net({Window::cube(1, 12.0)});
  const FiltrationFunction kappa = FiltrationFunction::cech_radii(0.2);
  LlnOptions options;
  options.q_max = 1;
  options.t_max = 0.5;
  options.seeds = 1;  // lattice mode draws one sample per window

  QuerySet qs;
  qs.grid.push_back({0, 0.1, 0.3});
  const ConvergenceReport report =
      run_lattice_average(spec, net, kappa, 3.0, qs, options);

  // Cells [3k - 1.5, 3k + 1.5) inside [-6, 6): k in {-1, 0, 1}.
  CHECK(report.tasks == 3);
  REQUIRE(report.rows.size() == 3);
  for (const ReportRow& row : report.rows) {
    CHECK(row.seed <= 2);
    CHECK(row.normalized == doctest::Approx(row.value / 3.0));
    CHECK(row.window_label == "cube_12");
  }
  REQUIRE(report.aggregates.size() == 1);
  CHECK(report.aggregates[0].n == 3);

  const ConvergenceReport again =
      run_lattice_average(spec, net, kappa, 3.0, qs, options);
  CHECK(rows_csv(report) == rows_csv(again));
}

TEST_CASE("query validation") {
  const ProcessSpec spec = radii_process(1.0, 0.2, 7);
  const AveragingNet net({Window::cube(1, 6.0)});
  const FiltrationFunction kappa = FiltrationFunction::cech_radii(0.2);
  LlnOptions options;
  options.q_max = 1;
  options.t_max = 0.5;

  QuerySet at_tmax;
  at_tmax.grid.push_back({0, 0.1, 0.5});
  CHECK_THROWS_AS(run_lln_experiment(spec, net, kappa, at_tmax, options),
                  config_error);

  QuerySet high_q;
  high_q.grid.push_back({2, 0.1, 0.3});
  CHECK_THROWS_AS(run_lln_experiment(spec, net, kappa, high_q, options),
                  config_error);

  QuerySet bad_rect;
  bad_rect.rectangles.emplace_back(0, Rectangle::zero_anchored(0.1, 0.2, 0.7));
  CHECK_THROWS_AS(run_lln_experiment(spec, net, kappa, bad_rect, options),
                  config_error);
}

TEST_CASE("subseed derivation matches the documented stream layout") {
  CHECK(lln_subseed(9, 2, 3) == derive_subseed(9, (2ull << 32) | 3));
  CHECK(lln_subseed(9, 0, 0) == derive_subseed(9, 0));
  CHECK(lln_subseed(9, 0, 1) != lln_subseed(9, 1, 0));
}

TEST_CASE("report json mirrors the report") {
  const ProcessSpec spec = radii_process(1.0, 0.2, 8);
  const AveragingNet net({Window::cube(1, 6.0)});
  const FiltrationFunction kappa = FiltrationFunction::cech_radii(0.2);
  LlnOptions options;
  options.q_max = 1;
  options.t_max = 0.5;
  options.seeds = 2;

  const ConvergenceReport report =
      run_lln_experiment(spec, net, kappa, small_queries(), options);
  const nlohmann::json j = nlohmann::json::parse(report_json(report));
  CHECK(j["tasks"].get<std::size_t>() == report.tasks);
  CHECK(j["rows"].size() == report.rows.size());
  CHECK(j["aggregates"].size() == report.aggregates.size());
  CHECK(j["skips"].size() == report.skips.size());
}
