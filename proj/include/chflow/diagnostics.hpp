#pragma once

// Monitors evaluated along a trajectory.  Each is a pure function of the
// sampled states, so recomputation gives identical numbers.

#include <optional>
#include <string>
#include <vector>

#include "chflow/time_integration.hpp"

namespace chflow {

/// Floor for relative-drift denominators.
inline constexpr double kDriftFloor = 1e-14;

/// |E(t) - E(0)| / max(E(0), floor) with E the metric norm squared.
std::vector<double> metric_norm_drift(const Trajectory& traj, const ModelParams& p);

/// |int u(t) - int u(0)|
std::vector<double> mean_velocity_drift(const Trajectory& traj);

/// max_j |rho(t, phi(xi_j)) phi_x(xi_j)^{a-1} - rho_0(xi_j) phi_x(0, xi_j)^{a-1}|.
/// Throws ConfigError when the trajectory carries no flow map.
std::vector<double> lagrangian_invariant(const Trajectory& traj, const ModelParams& p);

/// min rho on the oversampled grid, per sample.
std::vector<double> rho_positivity(const Trajectory& traj);

struct StretchSeries {
  std::vector<double> gamma;   // max_j 1 / phi_x(xi_j)
  std::vector<double> bound;   // gamma(0) exp(K(t) t), K the running max of sup |u_x|
  std::vector<double> ratio;   // gamma / bound
  bool degenerate = false;     // some phi_x <= 0 was met
};

/// Throws ConfigError when the trajectory carries no flow map.
StretchSeries stretch_bound(const Trajectory& traj);

/// ||A u||^2_{H^k} + ||rho||^2_{H^{k+1}}, integer orders taken from the same
/// (1 + 4 pi^2 k^2) symbol family as A.
double sobolev_ladder(const AlgebraElement& U, const ModelParams& p, unsigned k);

struct AprioriResult {
  bool holds = true;
  double lhs = 0.0;    // 3/4 ||u||^2_{H^s} + kappa ||rho||^2_{L2}
  double rhs = 0.0;    // ||U||^2 + alpha^2 / 2
  double slack = 0.0;  // rhs - lhs
  double scale = 1.0;  // 1 + max(|lhs|, |rhs|)
};

AprioriResult apriori_check(const AlgebraElement& U, const MetricParams& p);

struct DiagnosticTolerances {
  double metric_drift = 1e-6;
  double mean_drift = 1e-8;
  /// multiplied by 1 + ||rho_0||_inf
  double lagrangian = 1e-6;
  double stretch_slack = 1e-3;
  double apriori = 1e-10;
};

/// One sample's worth of monitor values, in output-column order.
struct DiagnosticRow {
  double t = 0.0;
  double metric_norm_sq = 0.0;
  double metric_drift = 0.0;
  double mean_u = 0.0;
  double min_rho = 0.0;
  double sup_ux = 0.0;
  double min_ux = 0.0;
  std::optional<double> lagrangian_dev;
  std::optional<double> stretch_ratio;
  double ladder_k0 = 0.0;
  double ladder_k1 = 0.0;
  double tail_fraction = 0.0;
  double apriori_slack = 0.0;
};

/// A monitor compared against its tolerance.  Monitors whose claim does not
/// apply to the run (for example drift when a != 2) are reported with
/// asserted = false and always pass.
struct MonitorCheck {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool asserted = false;
  bool passed = true;
};

struct DiagnosticReport {
  std::vector<DiagnosticRow> rows;

  double max_metric_drift = 0.0;
  double max_mean_drift = 0.0;
  std::optional<double> max_lagrangian_dev;
  double min_rho = 0.0;
  double initial_min_rho = 0.0;
  double max_sup_ux = 0.0;
  double min_min_ux = 0.0;
  std::optional<double> max_stretch_ratio;
  bool flow_degenerate = false;
  double max_ladder_k0 = 0.0;
  double max_ladder_k1 = 0.0;
  double max_tail_fraction = 0.0;
  double min_apriori_slack = 0.0;

  std::vector<MonitorCheck> checks;

  bool passed() const noexcept;
};

DiagnosticReport build_report(const Trajectory& traj, const ModelParams& p,
                              const DiagnosticTolerances& tol = {});

}  // namespace chflow
