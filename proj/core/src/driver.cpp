#include "kpd/driver.hpp"

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>

#include "kpd/complex.hpp"
#include "kpd/decomposition.hpp"
#include "kpd/errors.hpp"
#include "kpd/experiment_config.hpp"
#include "kpd/lln.hpp"
#include "kpd/persistence.hpp"
#include "kpd/point_set.hpp"

namespace fs = std::filesystem;

namespace kpd {
namespace {

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Write-then-rename so a crashed run never leaves a truncated cache entry.
void write_text_atomic(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
  }
  fs::rename(tmp, path);
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

// The sample cache key covers exactly the fields a (window, seed) diagram
// depends on; net, queries, seeds, mode and out_dir are scrubbed to
// constants.
std::string sample_key_material(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.net_shape = "cube";
  c.net_sizes = {1.0};
  c.query_q.clear();
  c.query_r.clear();
  c.query_s.clear();
  c.rectangles.clear();
  c.seeds = 1;
  c.mode = "seeds";
  c.lattice_m = 0.0;
  c.out_dir = "";
  return config_to_json_text(c);
}

}  // namespace

int run_diagram_command(const DiagramArgs& args) {
  try {
    std::ifstream in(args.input_path);
    if (!in) {
      std::cerr << "diagram: cannot open " << args.input_path << "\n";
      return 2;
    }
    const MarkedPointSet points = read_points_csv(in);

    int q_max = args.q_max;
    double t_max = args.t_max;
    const FiltrationFunction kappa = [&]() -> FiltrationFunction {
      if (!args.config_path.empty()) {
        const ExperimentConfig config = load_config(args.config_path);
        if (config.dimension != points.dim())
          throw config_error("diagram: config dimension " +
                             std::to_string(config.dimension) +
                             " does not match input dimension " +
                             std::to_string(points.dim()));
        q_max = config.q_max;
        t_max = config.t_max;
        return config.make_kappa();
      }
      if (args.kind == "cech_radii")
        return FiltrationFunction::cech_radii(args.radius_cap);
      if (args.kind == "rips_radii")
        return FiltrationFunction::rips_radii(args.radius_cap);
      throw config_error("diagram: kind '" + args.kind +
                         "' needs --config for its mark family");
    }();

    const FilteredComplex complex =
        build_filtered_complex(points, kappa, q_max, t_max);
    const PersistenceDiagram diagram = reduce(complex);

    if (args.out_path == "-") {
      write_diagram_csv(diagram, std::cout);
    } else {
      std::ostringstream os;
      write_diagram_csv(diagram, os);
      write_file(args.out_path, os.str());
    }
    std::cerr << "diagram: " << points.size() << " points, "
              << complex.simplices().size() << " simplices, "
              << diagram.pairs().size() << " pairs\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "diagram: error: " << e.what() << "\n";
    return 2;
  }
}

int run_lln_command(const LlnArgs& args) {
  try {
    ExperimentConfig config = load_config(args.config_path);
    if (args.has_seed) config.process.seed = args.seed;
    if (!args.out_dir.empty()) config.out_dir = args.out_dir;
    validate_config(config);
    const int jobs = args.jobs < 1 ? 1 : args.jobs;

    const FiltrationFunction kappa = config.make_kappa();
    const AveragingNet net = config.make_net();
    const QuerySet queries = config.make_queries();
    const LlnOptions options = config.make_options(jobs);

    const fs::path out_dir(config.out_dir);
    fs::create_directories(out_dir);

    ConvergenceReport report;
    if (config.mode == "lattice") {
      report = run_lattice_average(config.process, net, kappa,
                                   config.lattice_m, queries, options);
    } else {
      const fs::path cache_dir = out_dir / "cache";
      fs::create_directories(cache_dir);
      const std::string base_key = sample_key_material(config);
      const std::size_t total = net.size() * options.seeds;
      std::mutex log_mutex;
      std::atomic<std::size_t> done{0};

      const auto log_task = [&](const Window& w, std::uint64_t si,
                                const char* how) {
        const std::size_t k = ++done;
        std::lock_guard<std::mutex> lock(log_mutex);
        std::cerr << "[lln] " << k << "/" << total << " " << w.label()
                  << " seed " << si << ": " << how << "\n";
      };

      DiagramSource source = [&](std::size_t wi, const Window& w,
                                 std::uint64_t si) -> PersistenceDiagram {
        const std::string key = hex16(fnv1a64(
            base_key + "|" + w.label() + "|" + std::to_string(si)));
        const fs::path csv_path = cache_dir / (key + ".csv");
        const fs::path skip_path = cache_dir / (key + ".skip");
        if (args.resume) {
          if (fs::exists(skip_path)) {
            std::string reason = slurp(skip_path);
            while (!reason.empty() &&
                   (reason.back() == '\n' || reason.back() == '\r'))
              reason.pop_back();
            if (reason.empty()) reason = "complex: simplex budget exceeded";
            log_task(w, si, "cached skip");
            throw budget_exceeded(reason);
          }
          if (fs::exists(csv_path)) {
            std::ifstream in(csv_path);
            PersistenceDiagram dgm =
                read_diagram_csv(in, options.q_max, options.t_max);
            log_task(w, si, "cached");
            return dgm;
          }
        }
        try {
          PersistenceDiagram dgm = compute_sample_diagram(
              config.process, w, kappa, lln_subseed(config.process.seed, wi, si),
              options.q_max, options.t_max, options.budget);
          std::ostringstream os;
          write_diagram_csv(dgm, os);
          write_text_atomic(csv_path, os.str());
          fs::remove(skip_path);
          log_task(w, si, "computed");
          return dgm;
        } catch (const budget_exceeded& e) {
          write_text_atomic(skip_path, std::string(e.what()) + "\n");
          fs::remove(csv_path);
          log_task(w, si, "skipped");
          throw;
        }
      };

      report = run_lln_experiment(config.process, net, kappa, queries, options,
                                  source);
    }

    {
      std::ostringstream os;
      write_report_rows_csv(report, os);
      write_file(out_dir / "rows.csv", os.str());
    }
    {
      std::ostringstream os;
      write_report_aggregates_csv(report, os);
      write_file(out_dir / "aggregates.csv", os.str());
    }
    {
      std::ostringstream os;
      write_report_skips_csv(report, os);
      write_file(out_dir / "skips.csv", os.str());
    }
    write_file(out_dir / "report.json", report_json(report));
    save_config(config, (out_dir / "config.json").string());

    std::cerr << "lln: " << report.tasks << " tasks, " << report.skips.size()
              << " skipped, outputs in " << out_dir.string() << "\n";
    if (report.tasks > 0 && 2 * report.skips.size() > report.tasks) {
      std::cerr << "lln: more than half of the tasks were skipped\n";
      return 3;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "lln: error: " << e.what() << "\n";
    return 2;
  }
}

int run_geometry_command(const GeometryArgs& args) {
  try {
    if (args.sizes.empty())
      throw config_error("geometry: at least one size is required");
    std::vector<Window> windows;
    windows.reserve(args.sizes.size());
    for (double s : args.sizes) {
      if (args.shape == "cube")
        windows.push_back(Window::cube(args.dimension, s));
      else if (args.shape == "ball")
        windows.push_back(Window::ball(args.dimension, s));
      else
        throw config_error("geometry: shape must be cube or ball");
    }
    const AveragingNet net(std::move(windows));
    const RatioTable table = verify_window_asymptotics(net, args.m, args.h);

    if (args.out_path.empty() || args.out_path == "-") {
      write_ratio_table_csv(table, std::cout);
    } else {
      std::ostringstream os;
      write_ratio_table_csv(table, os);
      write_file(args.out_path, os.str());
    }
    std::cerr << "geometry: inner " << (table.inner_monotone ? "ok" : "NOT monotone")
              << ", annulus " << (table.annulus_monotone ? "ok" : "NOT monotone")
              << ", shell " << (table.shell_monotone ? "ok" : "NOT monotone")
              << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "geometry: error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace kpd
