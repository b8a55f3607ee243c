#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "kpd/complex.hpp"
#include "kpd/persistence.hpp"
#include "kpd/processes.hpp"
#include "kpd/window.hpp"

namespace kpd {

// One persistent-Betti query beta_q^{r,s}; requires r <= s < t_max.
struct LlnQuery {
  int q = 0;
  double r = 0.0;
  double s = 0.0;
};

struct QuerySet {
  std::vector<LlnQuery> grid;
  std::vector<std::pair<int, Rectangle>> rectangles;
};

struct LlnOptions {
  int q_max = 1;
  double t_max = 1.0;
  std::size_t budget = kNoBudget;  // max simplices per sample
  int jobs = 1;
  std::uint64_t seeds = 1;  // samples per window, seed indices 0..seeds-1
};

struct ReportRow {
  std::string window_label;
  double volume = 0.0;
  std::uint64_t seed = 0;  // seed index (or cell index in lattice mode)
  int q = 0;
  std::string kind;  // "betti", "xi" (half-open) or "xi0" (zero-anchored)
  double r1 = 0.0, r2 = 0.0, s1 = 0.0, s2 = 0.0;
  double value = 0.0;
  double normalized = 0.0;
};

struct SkipRecord {
  std::string window_label;
  std::uint64_t seed = 0;
  std::string reason;
};

struct AggregateRow {
  std::string window_label;
  double volume = 0.0;
  int q = 0;
  std::string kind;
  double r1 = 0.0, r2 = 0.0, s1 = 0.0, s2 = 0.0;
  double mean = 0.0;        // of normalized values across seeds
  double stderr_ = 0.0;     // sample standard error; NaN when n < 2
  double delta_prev = 0.0;  // mean minus the previous window's mean; NaN first
  std::int64_t n = 0;       // contributing samples
};

struct ConvergenceReport {
  std::vector<ReportRow> rows;
  std::vector<AggregateRow> aggregates;
  std::vector<SkipRecord> skips;
  std::size_t tasks = 0;  // total (window, seed) tasks attempted
};

// Subseed for sample (window_index, seed_index) under a root seed: a
// counter-based derivation, stream = window_index * 2^32 + seed_index.
std::uint64_t lln_subseed(std::uint64_t root, std::size_t window_index,
                          std::uint64_t seed_index);

// sample -> complex -> reduce for one (window, seed) task.
PersistenceDiagram compute_sample_diagram(const ProcessSpec& spec,
                                          const Window& window,
                                          const FiltrationFunction& kappa,
                                          std::uint64_t subseed, int q_max,
                                          double t_max, std::size_t budget);

// Replaces the sampling pipeline for one task; used for cached resumes.
// Must throw budget_exceeded to signal a recorded skip.
using DiagramSource = std::function<PersistenceDiagram(
    std::size_t window_index, const Window& window, std::uint64_t seed_index)>;

// For each window and seed index: sample, build, reduce, evaluate the
// normalized queries. Tasks run on `jobs` threads; rows and aggregates are
// merged in deterministic (window, seed, query) order. A task whose complex
// exceeds the budget is recorded as a skip and excluded from aggregates.
ConvergenceReport run_lln_experiment(const ProcessSpec& spec,
                                     const AveragingNet& net,
                                     const FiltrationFunction& kappa,
                                     const QuerySet& queries,
                                     const LlnOptions& options,
                                     DiagramSource source = nullptr);

// Ergodic-average variant: one sample per window, queries evaluated on the
// restriction to every inner lattice cell of side cell_m, averaged across
// cells. Seed column holds the cell index.
ConvergenceReport run_lattice_average(const ProcessSpec& spec,
                                      const AveragingNet& net,
                                      const FiltrationFunction& kappa,
                                      double cell_m, const QuerySet& queries,
                                      const LlnOptions& options);

// CSV: window_label,volume,seed,q,kind,r1,r2,s1,s2,value,normalized
void write_report_rows_csv(const ConvergenceReport& report, std::ostream& out);
// CSV: window_label,volume,q,kind,r1,r2,s1,s2,mean,stderr,delta_prev,n
// NaN stderr/delta render as empty fields.
void write_report_aggregates_csv(const ConvergenceReport& report,
                                 std::ostream& out);
// CSV: window_label,seed,reason
void write_report_skips_csv(const ConvergenceReport& report, std::ostream& out);
// JSON mirror carrying rows, aggregates, and skips with identical fields.
std::string report_json(const ConvergenceReport& report);

}  // namespace kpd
