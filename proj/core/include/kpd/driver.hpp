#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace kpd {

// Exit codes: 0 success, 2 bad arguments/config/input, 3 too many skipped
// tasks (> 50%).

struct DiagramArgs {
  std::string input_path;   // points CSV
  std::string config_path;  // optional; supplies kappa/q_max/t_max
  std::string kind = "cech_radii";  // used when no config is given
  double radius_cap = 0.0;
  int q_max = 1;
  double t_max = 1.0;
  std::string out_path = "diagram.csv";
};
int run_diagram_command(const DiagramArgs& args);

struct LlnArgs {
  std::string config_path;
  std::string out_dir;  // overrides the config's out_dir when nonempty
  int jobs = 1;
  bool has_seed = false;
  std::uint64_t seed = 0;  // overrides the config's root seed
  bool resume = false;     // reuse cached per-(window, seed) diagrams
};
int run_lln_command(const LlnArgs& args);

struct GeometryArgs {
  int dimension = 2;
  std::string shape = "cube";  // "cube" | "ball"
  std::vector<double> sizes;
  double m = 3.0;
  double h = 1.0;
  std::string out_path;  // empty writes to stdout
};
int run_geometry_command(const GeometryArgs& args);

}  // namespace kpd
