#include <thread>

#include "CLI11.hpp"
#include "kpd/driver.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Marked-point filtrations, persistence diagrams and convergence reports"};
  app.require_subcommand(1);

  kpd::DiagramArgs diagram_args;
  CLI::App* diagram = app.add_subcommand(
      "diagram", "Build a filtered complex from a points CSV and reduce it");
  diagram->add_option("input", diagram_args.input_path, "marked points CSV")
      ->required();
  diagram->add_option("--config", diagram_args.config_path,
                      "experiment config supplying the filtration and horizons");
  diagram->add_option("--kind", diagram_args.kind,
                      "filtration kind when no config is given: cech_radii or rips_radii")
      ->capture_default_str();
  diagram->add_option("--radius-cap", diagram_args.radius_cap,
                      "radius mark cap for the radii kinds")
      ->capture_default_str();
  diagram->add_option("--qmax", diagram_args.q_max, "top homology degree")
      ->capture_default_str();
  diagram->add_option("--tmax", diagram_args.t_max, "filtration horizon")
      ->capture_default_str();
  diagram->add_option("--out", diagram_args.out_path,
                      "output CSV path, '-' for stdout")
      ->capture_default_str();

  kpd::LlnArgs lln_args;
  lln_args.jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (lln_args.jobs < 1) lln_args.jobs = 1;
  CLI::App* lln = app.add_subcommand(
      "lln", "Run the convergence experiment described by a config file");
  lln->add_option("--config", lln_args.config_path, "experiment config (JSON)")
      ->required();
  lln->add_option("--out", lln_args.out_dir,
                  "output directory, overrides the config");
  lln->add_option("--jobs", lln_args.jobs, "worker threads")
      ->capture_default_str();
  CLI::Option* seed_opt =
      lln->add_option("--seed", lln_args.seed, "root seed, overrides the config");
  lln->add_flag("--resume", lln_args.resume,
                "reuse cached per-sample diagrams and skip markers");

  kpd::GeometryArgs geometry_args;
  CLI::App* geometry = app.add_subcommand(
      "geometry", "Lattice decomposition ratio table for a window net");
  // Long-only help so the single-letter shell-width option --h stays free.
  geometry->set_help_flag("--help", "print help");
  geometry->add_option("--dim", geometry_args.dimension, "ambient dimension")
      ->capture_default_str();
  geometry->add_option("--shape", geometry_args.shape,
                       "window shape: cube or ball")
      ->capture_default_str();
  geometry
      ->add_option("--sizes", geometry_args.sizes,
                   "window sides (cube) or radii (ball), strictly increasing")
      ->required();
  geometry->add_option("--m", geometry_args.m, "lattice cell side")
      ->capture_default_str();
  geometry->add_option("--h", geometry_args.h, "boundary shell width")
      ->capture_default_str();
  geometry->add_option("--out", geometry_args.out_path,
                       "output CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  if (diagram->parsed()) return kpd::run_diagram_command(diagram_args);
  if (lln->parsed()) {
    lln_args.has_seed = seed_opt->count() > 0;
    return kpd::run_lln_command(lln_args);
  }
  if (geometry->parsed()) return kpd::run_geometry_command(geometry_args);
  return 2;
}
