#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "chflow/checks.hpp"
#include "chflow/simulation.hpp"

using namespace chflow;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("chflow_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(CHFLOW_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("shortest round-trip formatting") {
  for (double v : {0.0, 1.0, -2.5, 0.1, 1e-300, 6.02214076e23, std::nextafter(1.0, 2.0)}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("simulate: zero data completes with zero drift") {
  TempDir tmp;
  spit(tmp.path / "cfg.json", R"({"grid": {"n": 32}, "stepper": {"t_end": 0.05}})");
  CHECK(run_cli("simulate --config " + (tmp.path / "cfg.json").string() + " --out " + (tmp.path / "out").string(),
                tmp.path / "log") == 0);
  const auto rows = read_csv(tmp.path / "out" / "trajectory.csv");
  REQUIRE(rows.size() == 7);  // header + steps 0, 10, ..., 50
  CHECK(rows[0] == std::vector<std::string>{"t", "metric_norm_sq", "metric_drift", "mean_u", "min_rho", "sup_ux",
                                            "min_ux", "lagrangian_dev", "stretch_ratio", "ladder_k0", "ladder_k1",
                                            "tail_fraction"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 12);
    CHECK(rows[i][2] == "0");
    CHECK(rows[i][7].empty());  // no flow map
  }
  const json summary = json::parse(slurp(tmp.path / "out" / "summary.json"));
  CHECK(summary["termination"]["completed"] == true);
  CHECK(summary["engine_version"] == kEngineVersion);
  CHECK(summary["config"]["stepper"]["dt"] == 1e-3);
  CHECK(summary["config"]["grid"]["n"] == 32);
}

TEST_CASE("simulate: CH breaking preset exits 2 with a slope blow-up") {
  TempDir tmp;
  spit(tmp.path / "cfg.json", R"({"preset": "ch_breaking"})");
  CHECK(run_cli("simulate --config " + (tmp.path / "cfg.json").string() + " --out " + (tmp.path / "out").string(),
                tmp.path / "log") == 2);
  const json summary = json::parse(slurp(tmp.path / "out" / "summary.json"));
  CHECK(summary["termination"]["completed"] == false);
  CHECK(summary["termination"]["reason"] == "slope");
  const double t_star = summary["termination"]["time"];
  CHECK(t_star > 0.0);
  CHECK(t_star < 20.0);
  // every row finite, the last one at t*
  const auto rows = read_csv(tmp.path / "out" / "trajectory.csv");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    for (std::size_t c : {0u, 1u, 2u, 3u, 4u, 5u, 6u, 9u, 10u, 11u}) CHECK(std::isfinite(std::stod(rows[i][c])));
  }
  CHECK(std::stod(rows.back()[0]) == doctest::Approx(t_star));
}

TEST_CASE("simulate: invalid config exits 1 and writes nothing") {
  TempDir tmp;
  spit(tmp.path / "cfg.json", R"({"model": {"s": 0.5}})");
  CHECK(run_cli("simulate --config " + (tmp.path / "cfg.json").string() + " --out " + (tmp.path / "out").string(),
                tmp.path / "log") == 1);
  CHECK_FALSE(fs::exists(tmp.path / "out"));
  CHECK(slurp(tmp.path / "log").find("s >= 1") != std::string::npos);

  CHECK(run_cli("simulate --config " + (tmp.path / "missing.json").string() + " --out " +
                    (tmp.path / "out").string(),
                tmp.path / "log") == 1);
  CHECK_FALSE(fs::exists(tmp.path / "out"));
  CHECK(run_cli("simulate", tmp.path / "log") == 1);
  CHECK(run_cli("frobnicate", tmp.path / "log") == 1);
  CHECK(run_cli("--help", tmp.path / "log") == 0);
}

TEST_CASE("simulate: output dir from the config, snapshots, determinism") {
  TempDir tmp;
  const fs::path out = tmp.path / "from_config";
  spit(tmp.path / "cfg.json", R"({"preset": "twocomp_smooth", "grid": {"n": 64},
      "stepper": {"t_end": 0.03, "sample_every": 5}, "output": {"dir": ")" + out.string() +
                                   R"(", "snapshot_every": 10}})");
  REQUIRE(run_cli("simulate --config " + (tmp.path / "cfg.json").string(), tmp.path / "log") == 0);
  for (const char* f : {"fields_0.csv", "fields_10.csv", "fields_20.csv", "fields_30.csv"}) CHECK(fs::exists(out / f));
  CHECK_FALSE(fs::exists(out / "fields_5.csv"));
  const auto fields = read_csv(out / "fields_0.csv");
  REQUIRE(fields.size() == 65);
  CHECK(fields[0] == std::vector<std::string>{"x", "u", "rho", "m"});
  CHECK(std::stod(fields[1][2]) == doctest::Approx(2.0));
  const auto traj = read_csv(out / "trajectory.csv");
  CHECK_FALSE(traj[1][7].empty());  // flow map on: lagrangian_dev present

  const std::string first = slurp(out / "trajectory.csv");
  const std::string first_summary = slurp(out / "summary.json");
  REQUIRE(run_cli("simulate --config " + (tmp.path / "cfg.json").string(), tmp.path / "log") == 0);
  CHECK(slurp(out / "trajectory.csv") == first);
  CHECK(slurp(out / "summary.json") == first_summary);
}

TEST_CASE("check: passes, is deterministic") {
  TempDir tmp;
  CHECK(run_cli("check", tmp.path / "a") == 0);
  CHECK(run_cli("check", tmp.path / "b") == 0);
  CHECK(slurp(tmp.path / "a") == slurp(tmp.path / "b"));
  CHECK(slurp(tmp.path / "a").find("FAIL") == std::string::npos);
}

TEST_CASE("check: a perturbed symbol breaks self-adjointness") {
  CheckFixture fx;
  fx.samples = 5;
  fx.symbol = [](long k, double s) { return MultiplierSymbol{s}(k) * Complex(1.0, 0.01 * static_cast<double>(k)); };
  const auto outcomes = run_check_suite(fx);
  bool seen = false;
  for (const auto& o : outcomes) {
    if (o.name == "A_self_adjoint") {
      seen = true;
      CHECK_FALSE(o.passed);
    }
  }
  CHECK(seen);
  std::ostringstream table;
  CHECK(run_check(table, fx) == 1);
  CHECK(table.str().find("A_self_adjoint             FAIL") != std::string::npos);
}

TEST_CASE("sweep: dichotomy cells, ordering, concurrency") {
  TempDir tmp;
  spit(tmp.path / "cfg.json", R"({"preset": "ch_breaking", "grid": {"n": 128}, "stepper": {"t_end": 1},
      "sweep": {"s": [1, 2]}})");
  REQUIRE(run_cli("sweep --config " + (tmp.path / "cfg.json").string() + " --out " + (tmp.path / "one").string(),
                  tmp.path / "log") == 0);
  std::istringstream lines(slurp(tmp.path / "one" / "sweep.jsonl"));
  std::string l1, l2, extra;
  std::getline(lines, l1);
  std::getline(lines, l2);
  CHECK_FALSE(std::getline(lines, extra));
  const json c1 = json::parse(l1), c2 = json::parse(l2);
  CHECK(c1["params"]["s"] == 1.0);
  CHECK(c1["status"] == "blowup");
  CHECK(c1["reason"] == "slope");
  CHECK(c1["t_star"].get<double>() > 0.0);
  CHECK(c2["params"]["s"] == 2.0);
  CHECK(c2["status"] == "completed");
  CHECK(c2["t_star"].is_null());

  REQUIRE(run_cli("sweep --jobs 3 --config " + (tmp.path / "cfg.json").string() + " --out " +
                      (tmp.path / "two").string(),
                  tmp.path / "log") == 0);
  CHECK(slurp(tmp.path / "two" / "sweep.jsonl") == slurp(tmp.path / "one" / "sweep.jsonl"));
}

TEST_CASE("sweep: one cell matches simulate") {
  TempDir tmp;
  const std::string base = R"({"preset": "twocomp_smooth", "grid": {"n": 64}, "stepper": {"t_end": 0.05}, )";
  spit(tmp.path / "sim.json", base + R"("model": {"kappa": 2}})");
  spit(tmp.path / "sw.json", base + R"("sweep": {"kappa": [2]}})");
  REQUIRE(run_cli("simulate --config " + (tmp.path / "sim.json").string() + " --out " + (tmp.path / "s").string(),
                  tmp.path / "log") == 0);
  REQUIRE(run_cli("sweep --config " + (tmp.path / "sw.json").string() + " --out " + (tmp.path / "w").string(),
                  tmp.path / "log") == 0);
  const json sim = json::parse(slurp(tmp.path / "s" / "summary.json"));
  const json cell = json::parse(slurp(tmp.path / "w" / "sweep.jsonl"));
  CHECK(cell["status"] == "completed");
  CHECK(cell["max_metric_drift"] == sim["monitors"]["max_metric_drift"]);
  CHECK(cell["max_sup_ux"] == sim["monitors"]["max_sup_ux"]);
}

TEST_CASE("sweep: empty grid and failing cells") {
  TempDir tmp;
  spit(tmp.path / "empty.json", R"({"sweep": {}})");
  CHECK(run_cli("sweep --config " + (tmp.path / "empty.json").string() + " --out " + (tmp.path / "e").string(),
                tmp.path / "log") == 1);
  spit(tmp.path / "none.json", R"({"grid": {"n": 16}})");
  CHECK(run_cli("sweep --config " + (tmp.path / "none.json").string() + " --out " + (tmp.path / "e").string(),
                tmp.path / "log") == 1);

  // s = 0.5 is invalid for the cell but not for the document; the sweep carries on
  spit(tmp.path / "bad.json", R"({"grid": {"n": 16}, "stepper": {"t_end": 0.01}, "sweep": {"s": [0.5, 1]}})");
  CHECK(run_cli("sweep --config " + (tmp.path / "bad.json").string() + " --out " + (tmp.path / "b").string(),
                tmp.path / "log") == 1);
  std::istringstream lines(slurp(tmp.path / "b" / "sweep.jsonl"));
  std::string l1, l2;
  std::getline(lines, l1);
  std::getline(lines, l2);
  const json c1 = json::parse(l1), c2 = json::parse(l2);
  CHECK(c1["status"] == "error");
  CHECK(c1["error"].get<std::string>().find("s >= 1") != std::string::npos);
  CHECK(c2["status"] == "completed");
}
