#pragma once

// Run drivers behind the command-line subcommands and their file outputs.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "chflow/config.hpp"

namespace chflow {

inline constexpr const char* kEngineVersion = "0.3.1";

/// Process exit codes shared by the subcommands.
enum ExitCode : int { kExitCompleted = 0, kExitConfigError = 1, kExitBlowup = 2 };

struct RunResult {
  Trajectory trajectory;
  DiagnosticReport report;
};

RunResult run_model(const SimulationConfig& cfg);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

/// trajectory.csv contents: header plus one row per sample.  Monitors that do
/// not apply to the run (no flow map) are left empty.
std::string trajectory_csv(const DiagnosticReport& report);

/// fields_<step>.csv contents: x, u, rho, m.
std::string fields_csv(const State& st, const ModelParams& p);

nlohmann::json summary_json(const SimulationConfig& cfg, const RunResult& result);

/// Runs the configuration and writes trajectory.csv, summary.json and any
/// field snapshots into out_dir.  Returns kExitCompleted or kExitBlowup.
int run_simulate(const SimulationConfig& cfg, const std::filesystem::path& out_dir);

/// Parses the file first; on a configuration error prints to `err`, writes
/// nothing and returns kExitConfigError.
int run_simulate_file(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
                      std::ostream& err);

/// Runs the Cartesian product of cfg.sweep (absent lists fall back to the
/// base model value) and writes one JSON line per cell to out_dir/sweep.jsonl
/// in cell order.  Cells run on up to `jobs` threads.  Returns
/// kExitConfigError for an empty grid or when any cell failed; otherwise 0.
int run_sweep(const SimulationConfig& cfg, const std::filesystem::path& out_dir, unsigned jobs, std::ostream& err);

int run_sweep_file(const std::filesystem::path& config_path, const std::filesystem::path& out_dir, unsigned jobs,
                   std::ostream& err);

}  // namespace chflow
