#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "doctest.h"
#include "kpd/decomposition.hpp"
#include "kpd/errors.hpp"
#include "kpd/experiment_config.hpp"

using namespace kpd;
namespace fs = std::filesystem;

namespace {

const std::string kSourceDir = KPD_SOURCE_DIR;
const std::string kTool = KPD_TOOL_PATH;

int run_cmd(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::current_path() / "cli_scratch" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("bundled configs round-trip through parse and serialize") {
  for (const char* name : {"default_lln.json", "smoke_lln.json"}) {
    const ExperimentConfig cfg =
        load_config(kSourceDir + "/configs/" + name);
    const std::string text = config_to_json_text(cfg);
    const ExperimentConfig back = config_from_json_text(text);
    CHECK(config_to_json_text(back) == text);
  }
}

TEST_CASE("config validation names the offending field") {
  ExperimentConfig cfg = load_config(kSourceDir + "/configs/smoke_lln.json");

  ExperimentConfig bad = cfg;
  bad.seeds = 0;
  CHECK_THROWS_WITH_AS(validate_config(bad), doctest::Contains("seeds"),
                       config_error);

  bad = cfg;
  bad.query_s = {0.6};  // equals t_max
  CHECK_THROWS_WITH_AS(validate_config(bad), doctest::Contains("t_max"),
                       config_error);

  bad = cfg;
  bad.net_sizes = {10.0, 10.0};
  CHECK_THROWS_WITH_AS(validate_config(bad), doctest::Contains("increasing"),
                       config_error);

  bad = cfg;
  bad.process.marking.mark = MarkDistribution::radius_uniform(0.0, 0.9);
  CHECK_THROWS_WITH_AS(validate_config(bad), doctest::Contains("radius_cap"),
                       config_error);

  bad = cfg;
  bad.kappa_kind = KappaKind::CechGrowth;
  CHECK_THROWS_AS(validate_config(bad), config_error);

  CHECK_THROWS_WITH_AS(config_from_json_text("{"),
                       doctest::Contains("invalid JSON"), config_error);
  CHECK_THROWS_WITH_AS(config_from_json_text("{}"), doctest::Contains("'"),
                       config_error);
}

TEST_CASE("cli diagram reproduces the golden file") {
  const fs::path dir = fresh_dir("diagram");
  const fs::path out = dir / "diagram.csv";
  const std::string cmd = kTool + " diagram " + kSourceDir +
                          "/tests/fixtures/unit_square.csv --kind cech_radii" +
                          " --radius-cap 0 --qmax 2 --tmax 1 --out " +
                          out.string() + " 2> " + (dir / "err.txt").string();
  REQUIRE(run_cmd(cmd) == 0);
  CHECK(slurp(out) ==
        slurp(kSourceDir + "/tests/fixtures/unit_square_diagram.csv"));
}

TEST_CASE("cli diagram handles empty and malformed inputs") {
  const fs::path dir = fresh_dir("diagram_edge");

  {
    std::ofstream f(dir / "empty.csv");
    f << "x1,x2,mark_kind,mark_value\n";
  }
  const fs::path out = dir / "out.csv";
  REQUIRE(run_cmd(kTool + " diagram " + (dir / "empty.csv").string() +
                  " --kind cech_radii --qmax 1 --tmax 1 --out " + out.string() +
                  " 2> /dev/null") == 0);
  CHECK(slurp(out) == "dim,birth,death,censored\n");

  {
    std::ofstream f(dir / "dup.csv");
    f << "x1,x2,mark_kind,mark_value\n0,0,radius,0\n0,0,radius,0\n";
  }
  const fs::path err = dir / "err.txt";
  CHECK(run_cmd(kTool + " diagram " + (dir / "dup.csv").string() +
                " --kind cech_radii --qmax 1 --tmax 1 --out " + out.string() +
                " 2> " + err.string()) != 0);
  CHECK(slurp(err).find("simplicity") != std::string::npos);

  {
    std::ofstream f(dir / "bad.csv");
    f << "x1,x2,mark_kind,mark_value\n0,zero,radius,0\n";
  }
  CHECK(run_cmd(kTool + " diagram " + (dir / "bad.csv").string() +
                " --kind cech_radii --qmax 1 --tmax 1 --out " + out.string() +
                " 2> " + err.string()) != 0);
  CHECK(slurp(err).find("line 2") != std::string::npos);
}

TEST_CASE("cli geometry equals the library table") {
  const fs::path dir = fresh_dir("geometry");
  const fs::path out = dir / "table.csv";
  REQUIRE(run_cmd(kTool +
                  " geometry --dim 2 --shape cube --sizes 10 100 1000"
                  " --m 3 --h 1 --out " +
                  out.string() + " 2> /dev/null") == 0);

  const RatioTable table = verify_window_asymptotics(
      AveragingNet({Window::cube(2, 10.0), Window::cube(2, 100.0),
                    Window::cube(2, 1000.0)}),
      3.0, 1.0);
  std::ostringstream os;
  write_ratio_table_csv(table, os);
  CHECK(slurp(out) == os.str());

  CHECK(run_cmd(kTool + " geometry --dim 2 --shape cube --sizes 10 --m 0" +
                " --h 1 --out " + out.string() + " 2> /dev/null") == 2);
}

TEST_CASE("cli lln: determinism, resume, seed override, skip exit code") {
  const fs::path dir = fresh_dir("lln");
  ExperimentConfig cfg = load_config(kSourceDir + "/configs/smoke_lln.json");
  cfg.net_sizes = {5.0, 7.0};
  cfg.seeds = 2;
  cfg.out_dir = (dir / "out").string();
  const fs::path cfg_path = dir / "config.json";
  save_config(cfg, cfg_path.string());

  const std::string base =
      kTool + " lln --config " + cfg_path.string() + " --jobs 2";
  REQUIRE(run_cmd(base + " 2> " + (dir / "err1.txt").string()) == 0);
  const char* files[] = {"rows.csv", "aggregates.csv", "skips.csv",
                         "report.json", "config.json"};
  std::map<std::string, std::string> first;
  for (const char* f : files) first[f] = slurp(dir / "out" / f);
  CHECK(first["skips.csv"] == "window_label,seed,reason\n");

  // Recompute from scratch into the same directory: byte-identical.
  REQUIRE(run_cmd(base + " 2> /dev/null") == 0);
  for (const char* f : files) CHECK(first[f] == slurp(dir / "out" / f));

  // Resume consumes the cache and reproduces the same outputs.
  fs::remove(dir / "out" / "rows.csv");
  REQUIRE(run_cmd(base + " --resume 2> " + (dir / "err2.txt").string()) == 0);
  for (const char* f : files) CHECK(first[f] == slurp(dir / "out" / f));
  CHECK(slurp(dir / "err2.txt").find("cached") != std::string::npos);

  // A different root seed changes the data.
  REQUIRE(run_cmd(base + " --seed 999 --out " + (dir / "out2").string() +
                  " 2> /dev/null") == 0);
  CHECK(first["rows.csv"] != slurp(dir / "out2" / "rows.csv"));

  // Starving the budget skips every task: exit code 3.
  ExperimentConfig starved = cfg;
  starved.budget = 1;
  starved.out_dir = (dir / "out3").string();
  save_config(starved, (dir / "starved.json").string());
  CHECK(run_cmd(kTool + " lln --config " + (dir / "starved.json").string() +
                " 2> /dev/null") == 3);
  CHECK(slurp(dir / "out3" / "skips.csv").find("budget") != std::string::npos);

  // Malformed config: exit code 2.
  {
    std::ofstream f(dir / "broken.json");
    f << "{ not json";
  }
  CHECK(run_cmd(kTool + " lln --config " + (dir / "broken.json").string() +
                " 2> /dev/null") == 2);
}
