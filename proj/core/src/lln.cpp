#include "kpd/lln.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "kpd/decomposition.hpp"
#include "kpd/detail/format.hpp"
#include "kpd/errors.hpp"
#include "kpd/geometry.hpp"
#include "kpd/rng.hpp"

namespace kpd {

namespace {

struct QueryKey {
  int q;
  std::string kind;
  double r1, r2, s1, s2;
};

std::vector<QueryKey> query_keys(const QuerySet& queries) {
  std::vector<QueryKey> keys;
  for (const LlnQuery& g : queries.grid)
    keys.push_back({g.q, "betti", 0.0, g.r, g.s, kInf});
  for (const auto& [q, rect] : queries.rectangles) {
    const bool anchored = rect.kind == Rectangle::Kind::ZeroAnchored;
    keys.push_back({q, anchored ? "xi0" : "xi", anchored ? 0.0 : rect.r1,
                    rect.r2, rect.s1, rect.s2});
  }
  return keys;
}

void validate_queries(const QuerySet& queries, const LlnOptions& options) {
  for (const LlnQuery& g : queries.grid) {
    if (g.q < 0 || g.q > options.q_max)
      throw config_error("lln: grid query q outside [0, q_max]");
    if (!(g.r >= 0.0) || !(g.r <= g.s) || !(g.s < options.t_max))
      throw config_error("lln: grid query needs 0 <= r <= s < t_max");
  }
  for (const auto& [q, rect] : queries.rectangles) {
    if (q < 0 || q > options.q_max)
      throw config_error("lln: rectangle query q outside [0, q_max]");
    if (!(rect.r1 >= 0.0) || !(rect.r1 <= rect.r2) || !(rect.r2 <= rect.s1) ||
        !(rect.s1 <= rect.s2))
      throw config_error("lln: rectangle must satisfy 0 <= r1 <= r2 <= s1 <= s2");
    if (rect.s2 > options.t_max && rect.s2 != kInf)
      throw config_error("lln: rectangle s2 must be <= t_max or +inf");
  }
}

std::vector<double> evaluate_queries(const PersistenceDiagram& dgm,
                                     const QuerySet& queries) {
  std::vector<double> vals;
  vals.reserve(queries.grid.size() + queries.rectangles.size());
  for (const LlnQuery& g : queries.grid)
    vals.push_back(
        static_cast<double>(persistent_betti(dgm, g.q, g.r, g.s)));
  for (const auto& [q, rect] : queries.rectangles)
    vals.push_back(static_cast<double>(diagram_rectangle_count(dgm, q, rect)));
  return vals;
}

struct TaskResult {
  bool skipped = false;
  std::string reason;
  std::vector<double> values;
};

void aggregate(const std::vector<QueryKey>& keys,
               const std::vector<std::vector<const TaskResult*>>& by_window,
               const AveragingNet& net, ConvergenceReport& report) {
  const double nan = std::nan("");
  std::vector<double> prev_mean(keys.size(), nan);
  for (std::size_t wi = 0; wi < net.size(); ++wi) {
    const double vol = net[wi].volume();
    for (std::size_t ki = 0; ki < keys.size(); ++ki) {
      double sum = 0.0;
      std::int64_t n = 0;
      for (const TaskResult* t : by_window[wi]) {
        if (t->skipped) continue;
        sum += t->values[ki] / vol;
        ++n;
      }
      AggregateRow row;
      row.window_label = net[wi].label();
      row.volume = vol;
      row.q = keys[ki].q;
      row.kind = keys[ki].kind;
      row.r1 = keys[ki].r1;
      row.r2 = keys[ki].r2;
      row.s1 = keys[ki].s1;
      row.s2 = keys[ki].s2;
      row.n = n;
      row.mean = n > 0 ? sum / n : nan;
      if (n > 1) {
        double ss = 0.0;
        for (const TaskResult* t : by_window[wi]) {
          if (t->skipped) continue;
          const double x = t->values[ki] / vol - row.mean;
          ss += x * x;
        }
        row.stderr_ = std::sqrt(ss / (n - 1)) / std::sqrt(static_cast<double>(n));
      } else {
        row.stderr_ = nan;
      }
      row.delta_prev = (wi > 0 && !std::isnan(prev_mean[ki]) && n > 0)
                           ? row.mean - prev_mean[ki]
                           : nan;
      prev_mean[ki] = row.mean;
      report.aggregates.push_back(std::move(row));
    }
  }
}

void emit_rows(const std::vector<QueryKey>& keys, const AveragingNet& net,
               const std::vector<std::vector<TaskResult>>& results,
               ConvergenceReport& report) {
  for (std::size_t wi = 0; wi < net.size(); ++wi) {
    const double vol = net[wi].volume();
    const std::string label = net[wi].label();
    for (std::size_t si = 0; si < results[wi].size(); ++si) {
      const TaskResult& t = results[wi][si];
      if (t.skipped) {
        report.skips.push_back({label, si, t.reason});
        continue;
      }
      for (std::size_t ki = 0; ki < keys.size(); ++ki) {
        ReportRow row;
        row.window_label = label;
        row.volume = vol;
        row.seed = si;
        row.q = keys[ki].q;
        row.kind = keys[ki].kind;
        row.r1 = keys[ki].r1;
        row.r2 = keys[ki].r2;
        row.s1 = keys[ki].s1;
        row.s2 = keys[ki].s2;
        row.value = t.values[ki];
        row.normalized = t.values[ki] / vol;
        report.rows.push_back(std::move(row));
      }
    }
  }
}

void run_tasks(int jobs, std::size_t total,
               const std::function<void(std::size_t)>& work) {
  if (jobs <= 1 || total <= 1) {
    for (std::size_t t = 0; t < total; ++t) work(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= total) return;
      try {
        work(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t nthreads =
      std::min(static_cast<std::size_t>(jobs), total);
  for (std::size_t i = 0; i < nthreads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::uint64_t lln_subseed(std::uint64_t root, std::size_t window_index,
                          std::uint64_t seed_index) {
  return derive_subseed(root, (static_cast<std::uint64_t>(window_index) << 32) |
                                  seed_index);
}

PersistenceDiagram compute_sample_diagram(const ProcessSpec& spec,
                                          const Window& window,
                                          const FiltrationFunction& kappa,
                                          std::uint64_t subseed, int q_max,
                                          double t_max, std::size_t budget) {
  const MarkedPointSet sample = draw_sample(spec, window, subseed);
  const FilteredComplex cx =
      build_filtered_complex(sample, kappa, q_max, t_max, budget);
  return reduce(cx);
}

ConvergenceReport run_lln_experiment(const ProcessSpec& spec,
                                     const AveragingNet& net,
                                     const FiltrationFunction& kappa,
                                     const QuerySet& queries,
                                     const LlnOptions& options,
                                     DiagramSource source) {
  validate_queries(queries, options);
  if (options.seeds < 1) throw config_error("lln: seeds must be >= 1");

  const std::vector<QueryKey> keys = query_keys(queries);
  const std::size_t nw = net.size();
  const std::uint64_t ns = options.seeds;

  std::vector<std::vector<TaskResult>> results(nw);
  for (auto& v : results) v.resize(ns);

  run_tasks(options.jobs, nw * ns, [&](std::size_t t) {
    const std::size_t wi = t / ns;
    const std::uint64_t si = t % ns;
    TaskResult& slot = results[wi][si];
    try {
      const PersistenceDiagram dgm =
          source ? source(wi, net[wi], si)
                 : compute_sample_diagram(spec, net[wi], kappa,
                                          lln_subseed(spec.seed, wi, si),
                                          options.q_max, options.t_max,
                                          options.budget);
      slot.values = evaluate_queries(dgm, queries);
    } catch (const budget_exceeded& e) {
      slot.skipped = true;
      slot.reason = e.what();
    }
  });

  ConvergenceReport report;
  report.tasks = nw * ns;
  emit_rows(keys, net, results, report);

  std::vector<std::vector<const TaskResult*>> by_window(nw);
  for (std::size_t wi = 0; wi < nw; ++wi)
    for (const TaskResult& t : results[wi]) by_window[wi].push_back(&t);
  aggregate(keys, by_window, net, report);
  return report;
}

ConvergenceReport run_lattice_average(const ProcessSpec& spec,
                                      const AveragingNet& net,
                                      const FiltrationFunction& kappa,
                                      double cell_m, const QuerySet& queries,
                                      const LlnOptions& options) {
  validate_queries(queries, options);
  if (!(cell_m > 0.0)) throw config_error("lln: lattice cell scale must be > 0");

  const std::vector<QueryKey> keys = query_keys(queries);
  const std::size_t nw = net.size();

  ConvergenceReport report;
  std::vector<std::vector<TaskResult>> results(nw);
  std::vector<double> cell_volumes(nw, 0.0);

  for (std::size_t wi = 0; wi < nw; ++wi) {
    const Window& w = net[wi];
    const WindowDecomposition dec = decompose_window(w, cell_m);
    const std::size_t ncells = dec.inner_count();
    results[wi].resize(ncells);
    report.tasks += ncells;
    cell_volumes[wi] = std::pow(cell_m, w.dim());

    const MarkedPointSet sample =
        draw_sample(spec, w, lln_subseed(spec.seed, wi, 0));

    run_tasks(options.jobs, ncells, [&](std::size_t ci) {
      TaskResult& slot = results[wi][ci];
      std::vector<double> lo(w.dim()), hi(w.dim());
      for (int k = 0; k < w.dim(); ++k) {
        const double z = dec.inner_centers[ci * w.dim() + k];
        lo[k] = z - 0.5 * cell_m;
        hi[k] = z + 0.5 * cell_m;
      }
      const Window cell = Window::box(lo, hi);
      try {
        const MarkedPointSet part = restrict(sample, cell);
        const FilteredComplex cx = build_filtered_complex(
            part, kappa, options.q_max, options.t_max, options.budget);
        slot.values = evaluate_queries(reduce(cx), queries);
      } catch (const budget_exceeded& e) {
        slot.skipped = true;
        slot.reason = e.what();
      }
    });
  }

  // Rows and aggregates normalize by the cell volume, not the window volume.
  for (std::size_t wi = 0; wi < nw; ++wi) {
    const std::string label = net[wi].label();
    const double vol = cell_volumes[wi];
    for (std::size_t ci = 0; ci < results[wi].size(); ++ci) {
      const TaskResult& t = results[wi][ci];
      if (t.skipped) {
        report.skips.push_back({label, ci, t.reason});
        continue;
      }
      for (std::size_t ki = 0; ki < keys.size(); ++ki) {
        ReportRow row;
        row.window_label = label;
        row.volume = vol;
        row.seed = ci;
        row.q = keys[ki].q;
        row.kind = keys[ki].kind;
        row.r1 = keys[ki].r1;
        row.r2 = keys[ki].r2;
        row.s1 = keys[ki].s1;
        row.s2 = keys[ki].s2;
        row.value = t.values[ki];
        row.normalized = t.values[ki] / vol;
        report.rows.push_back(std::move(row));
      }
    }
  }

  const double nan = std::nan("");
  std::vector<double> prev_mean(keys.size(), nan);
  for (std::size_t wi = 0; wi < nw; ++wi) {
    const double vol = cell_volumes[wi];
    for (std::size_t ki = 0; ki < keys.size(); ++ki) {
      double sum = 0.0;
      std::int64_t n = 0;
      for (const TaskResult& t : results[wi]) {
        if (t.skipped) continue;
        sum += t.values[ki] / vol;
        ++n;
      }
      AggregateRow row;
      row.window_label = net[wi].label();
      row.volume = vol;
      row.q = keys[ki].q;
      row.kind = keys[ki].kind;
      row.r1 = keys[ki].r1;
      row.r2 = keys[ki].r2;
      row.s1 = keys[ki].s1;
      row.s2 = keys[ki].s2;
      row.n = n;
      row.mean = n > 0 ? sum / n : nan;
      if (n > 1) {
        double ss = 0.0;
        for (const TaskResult& t : results[wi]) {
          if (t.skipped) continue;
          const double x = t.values[ki] / vol - row.mean;
          ss += x * x;
        }
        row.stderr_ = std::sqrt(ss / (n - 1)) / std::sqrt(static_cast<double>(n));
      } else {
        row.stderr_ = nan;
      }
      row.delta_prev = (wi > 0 && !std::isnan(prev_mean[ki]) && n > 0)
                           ? row.mean - prev_mean[ki]
                           : nan;
      prev_mean[ki] = row.mean;
      report.aggregates.push_back(std::move(row));
    }
  }
  return report;
}

namespace {

std::string fmt_or_empty(double v) {
  return std::isnan(v) ? std::string() : detail::fmt_double(v);
}

}  // namespace

void write_report_rows_csv(const ConvergenceReport& report, std::ostream& out) {
  out << "window_label,volume,seed,q,kind,r1,r2,s1,s2,value,normalized\n";
  for (const ReportRow& r : report.rows)
    out << r.window_label << ',' << detail::fmt_double(r.volume) << ',' << r.seed
        << ',' << r.q << ',' << r.kind << ',' << detail::fmt_double(r.r1) << ','
        << detail::fmt_double(r.r2) << ',' << detail::fmt_double(r.s1) << ','
        << detail::fmt_double(r.s2) << ',' << detail::fmt_double(r.value) << ','
        << detail::fmt_double(r.normalized) << '\n';
}

void write_report_aggregates_csv(const ConvergenceReport& report,
                                 std::ostream& out) {
  out << "window_label,volume,q,kind,r1,r2,s1,s2,mean,stderr,delta_prev,n\n";
  for (const AggregateRow& a : report.aggregates)
    out << a.window_label << ',' << detail::fmt_double(a.volume) << ',' << a.q
        << ',' << a.kind << ',' << detail::fmt_double(a.r1) << ','
        << detail::fmt_double(a.r2) << ',' << detail::fmt_double(a.s1) << ','
        << detail::fmt_double(a.s2) << ',' << fmt_or_empty(a.mean) << ','
        << fmt_or_empty(a.stderr_) << ',' << fmt_or_empty(a.delta_prev) << ','
        << a.n << '\n';
}

void write_report_skips_csv(const ConvergenceReport& report, std::ostream& out) {
  out << "window_label,seed,reason\n";
  for (const SkipRecord& s : report.skips)
    out << s.window_label << ',' << s.seed << ',' << s.reason << '\n';
}

std::string report_json(const ConvergenceReport& report) {
  nlohmann::json j;
  j["tasks"] = report.tasks;
  auto& rows = j["rows"] = nlohmann::json::array();
  for (const ReportRow& r : report.rows) {
    nlohmann::json o;
    o["window_label"] = r.window_label;
    o["volume"] = r.volume;
    o["seed"] = r.seed;
    o["q"] = r.q;
    o["kind"] = r.kind;
    o["r1"] = detail::fmt_double(r.r1);
    o["r2"] = detail::fmt_double(r.r2);
    o["s1"] = detail::fmt_double(r.s1);
    o["s2"] = detail::fmt_double(r.s2);
    o["value"] = r.value;
    o["normalized"] = r.normalized;
    rows.push_back(std::move(o));
  }
  auto& aggs = j["aggregates"] = nlohmann::json::array();
  for (const AggregateRow& a : report.aggregates) {
    nlohmann::json o;
    o["window_label"] = a.window_label;
    o["volume"] = a.volume;
    o["q"] = a.q;
    o["kind"] = a.kind;
    o["r1"] = detail::fmt_double(a.r1);
    o["r2"] = detail::fmt_double(a.r2);
    o["s1"] = detail::fmt_double(a.s1);
    o["s2"] = detail::fmt_double(a.s2);
    o["mean"] = fmt_or_empty(a.mean);
    o["stderr"] = fmt_or_empty(a.stderr_);
    o["delta_prev"] = fmt_or_empty(a.delta_prev);
    o["n"] = a.n;
    aggs.push_back(std::move(o));
  }
  auto& skips = j["skips"] = nlohmann::json::array();
  for (const SkipRecord& s : report.skips) {
    nlohmann::json o;
    o["window_label"] = s.window_label;
    o["seed"] = s.seed;
    o["reason"] = s.reason;
    skips.push_back(std::move(o));
  }
  return j.dump(2) + "\n";
}

}  // namespace kpd
