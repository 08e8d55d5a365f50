// chflow: simulate / check / sweep front end.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "chflow/checks.hpp"
#include "chflow/simulation.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Spectral solver for the two-component periodic Camassa-Holm family"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;

  auto* simulate = app.add_subcommand("simulate", "Run one configuration and write trajectory/summary files");
  simulate->add_option("--config", config_path, "JSON configuration file")->required();
  simulate->add_option("--out", out_dir, "Output directory (default: output.dir from the config)");

  app.add_subcommand("check", "Run the operator-identity and property suite");

  unsigned jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter grid and write sweep.jsonl");
  sweep->add_option("--config", config_path, "JSON configuration file with a sweep section")->required();
  sweep->add_option("--jobs", jobs, "Concurrent cells")->check(CLI::PositiveNumber);
  sweep->add_option("--out", out_dir, "Output directory (default: output.dir from the config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : chflow::kExitConfigError;
  }

  // The output directory defaults to the config's output.dir; it is resolved
  // here so a bad config still writes nothing.
  auto resolve_out = [&]() -> std::string {
    if (!out_dir.empty()) return out_dir;
    std::ifstream in(config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    return chflow::parse_config(ss.str()).output.dir;
  };

  try {
    if (app.got_subcommand("check")) return chflow::run_check(std::cout);
    std::string dir;
    try {
      dir = resolve_out();
    } catch (const chflow::ConfigError& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return chflow::kExitConfigError;
    }
    if (app.got_subcommand("simulate")) {
      const int rc = chflow::run_simulate_file(config_path, dir, std::cerr);
      if (rc == chflow::kExitBlowup) std::cerr << "blow-up detected; see " << dir << "/summary.json\n";
      return rc;
    }
    return chflow::run_sweep_file(config_path, dir, jobs, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return chflow::kExitConfigError;
  }
}
