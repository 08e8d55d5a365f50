#pragma once

// Run configuration: JSON parsing with defaults and named presets, and
// construction of initial data.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "chflow/diagnostics.hpp"
#include "chflow/time_integration.hpp"

namespace chflow {

enum class FieldTarget { u, rho, both };

/// a cos(2 pi k x) + b sin(2 pi k x)
struct FourierTerm {
  long k = 0;
  double cos = 0.0;
  double sin = 0.0;
};

struct InitialComponent {
  enum class Kind { single_mode, fourier_list, gaussian_bump };
  Kind kind = Kind::single_mode;
  FieldTarget target = FieldTarget::u;
  // single_mode: amplitude * cos(2 pi k x + phase)
  double amplitude = 0.0;
  long wavenumber = 1;
  double phase = 0.0;
  // gaussian_bump: periodised amplitude * exp(-(x - center)^2 / (2 width^2)), truncated to |k| <= n/3
  double center = 0.5;
  double width = 0.1;
  // fourier_list
  std::vector<FourierTerm> u_terms;
  std::vector<FourierTerm> rho_terms;
};

struct InitialConditionSpec {
  std::vector<InitialComponent> components;
  double u_offset = 0.0;
  double rho_offset = 0.0;
};

struct OutputConfig {
  std::string dir = "out";
  /// Field snapshots every this many steps; 0 disables.  Must be a multiple of
  /// stepper.sample_every.
  std::size_t snapshot_every = 0;
};

struct SweepGrid {
  std::vector<double> s;
  std::vector<double> a;
  std::vector<double> kappa;
  std::vector<double> alpha;
};

struct SimulationConfig {
  std::optional<std::string> preset;
  std::size_t n = 256;
  ModelParams model;
  StepperConfig stepper;
  BlowupThresholds thresholds;
  InitialConditionSpec initial;
  bool flow_map = false;
  OutputConfig output;
  std::optional<SweepGrid> sweep;

  /// Throws ConfigError naming the offending field and constraint.
  void validate() const;
};

/// Names of the shipped presets.
std::vector<std::string> preset_names();

/// Parse a JSON document.  Keys are layered: built-in defaults, then the named
/// preset (if any), then the document itself; a document "initial" replaces the
/// preset's initial data wholesale.  Unknown keys and violated invariants raise
/// ConfigError.
SimulationConfig parse_config(const std::string& text);

/// The fully-defaulted configuration, in the same schema parse_config reads.
nlohmann::json to_json(const SimulationConfig& cfg);

/// Fields from an initial-condition spec.  Rejects wavenumbers beyond n/3.
AlgebraElement build_initial_condition(const InitialConditionSpec& spec, const PeriodicGrid& grid, double alpha);

}  // namespace chflow
