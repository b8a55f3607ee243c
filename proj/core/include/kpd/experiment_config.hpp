#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kpd/kappa.hpp"
#include "kpd/lln.hpp"
#include "kpd/processes.hpp"
#include "kpd/window.hpp"

namespace kpd {

// Full description of one experiment run. JSON on disk; the grammar is
// documented in the repository README. Parse -> serialize -> parse is the
// identity on the serialized form.
struct ExperimentConfig {
  int dimension = 2;

  KappaKind kappa_kind = KappaKind::CechRadii;
  double radius_cap = 0.0;  // radii kinds
  std::vector<GrowthFunction> growth_family;
  std::vector<Shape> shape_family;

  ProcessSpec process;

  std::string net_shape = "cube";  // "cube" | "ball"
  std::vector<double> net_sizes;   // sides or radii, strictly increasing

  int q_max = 1;
  double t_max = 1.0;

  std::vector<int> query_q;       // dimensions evaluated on the grid
  std::vector<double> query_r;    // grid r values
  std::vector<double> query_s;    // grid s values; all (r,s) need r <= s < t_max
  std::vector<std::pair<int, Rectangle>> rectangles;

  std::uint64_t seeds = 1;
  std::size_t budget = kNoBudget;
  std::string mode = "seeds";  // "seeds" | "lattice"
  double lattice_m = 0.0;      // cell scale for lattice mode
  std::string out_dir = "out";

  FiltrationFunction make_kappa() const;
  AveragingNet make_net() const;
  QuerySet make_queries() const;
  LlnOptions make_options(int jobs) const;
};

// Throws config_error with a field-naming message on any violation.
void validate_config(const ExperimentConfig& config);

ExperimentConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const ExperimentConfig& config);

ExperimentConfig load_config(const std::string& path);
void save_config(const ExperimentConfig& config, const std::string& path);

}  // namespace kpd
