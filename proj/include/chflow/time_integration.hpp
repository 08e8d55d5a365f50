#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "chflow/dynamics.hpp"
#include "chflow/errors.hpp"

namespace chflow {

struct StepperConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  std::size_t sample_every = 10;

  void validate() const;
  /// Number of steps needed to reach t_end; the last one is shortened if
  /// t_end is not a multiple of dt.
  std::size_t step_count() const;
};

struct BlowupThresholds {
  double slope_limit = 1e3;
  double tail_fraction_limit = 0.1;

  void validate() const;
};

enum class BlowupReason { none, non_finite, slope, spectral_tail };

std::string to_string(BlowupReason reason);

/// Monitors evaluated by detect_blowup.  min_ux and tail_fraction are NaN when
/// the state is not finite.
struct BlowupStatus {
  bool triggered = false;
  BlowupReason reason = BlowupReason::none;
  double min_ux = 0.0;
  double tail_fraction = 0.0;
};

struct Termination {
  bool completed = true;
  BlowupReason reason = BlowupReason::none;
  /// Time of the last completed step (t_end on completion).
  double time = 0.0;
};

struct Trajectory {
  std::vector<std::size_t> steps;
  std::vector<double> times;
  std::vector<State> states;
  std::vector<BlowupStatus> monitors;
  Termination termination;
  std::size_t steps_taken = 0;
};

// -- generic classical RK4 ---------------------------------------------------
//
// Y is the evolved type and K its derivative.  The following must be found by
// ADL (or be the double overloads below):
//   Y advanced(const Y&, double h, const K&)   -- y + h k
//   void axpy(double c, const K& k, K& acc)     -- acc += c k

inline double advanced(double y, double h, double k) { return y + h * k; }
inline void axpy(double c, double k, double& acc) { acc += c * k; }

/// One classical four-stage Runge-Kutta step.  dt may be negative (used for
/// reversibility checks) but must be finite and nonzero.
template <class Y, class Rhs>
Y rk4_step(const Rhs& rhs, const Y& y, double dt) {
  if (!std::isfinite(dt) || dt == 0.0) throw ConfigError("rk4_step: dt must be finite and nonzero");
  auto k1 = rhs(y);
  auto k2 = rhs(advanced(y, 0.5 * dt, k1));
  auto k3 = rhs(advanced(y, 0.5 * dt, k2));
  auto k4 = rhs(advanced(y, dt, k3));
  auto incr = k1;
  axpy(-5.0 / 6.0, k1, incr);
  axpy(1.0 / 3.0, k2, incr);
  axpy(1.0 / 3.0, k3, incr);
  axpy(1.0 / 6.0, k4, incr);
  return advanced(y, dt, incr);
}

/// RK4 step of the coupled model (fields plus optional flow map).
State rk4_step(const State& st, double dt, const ModelParams& p);

/// Triggered iff any value is non-finite, min u_x on the oversampled grid drops
/// below -slope_limit, or the |k| > n/3 energy fraction of u or rho exceeds
/// tail_fraction_limit.
BlowupStatus detect_blowup(const State& st, const BlowupThresholds& thresholds);

/// Fixed-step integration from st0 to cfg.t_end.  Samples the initial state,
/// every sample_every steps and the final state.  Blow-up ends the run and is
/// recorded in the termination record; only finite states are ever sampled.
Trajectory advance(const State& st0, const ModelParams& p, const StepperConfig& cfg,
                   const BlowupThresholds& thresholds);

struct OrderProbeResult {
  std::vector<double> dts;     // descending; the last entry is the reference
  std::vector<double> errors;  // sup-norm distance to the reference, one per non-reference dt
  std::vector<double> orders;  // log(e_i / e_{i+1}) / log(dt_i / dt_{i+1})
  double measured_order = 0.0; // from the finest non-reference pair
  bool conclusive = false;
  std::string note;
};

/// Convergence order from solutions at several step sizes, measured against
/// the finest one.  `solve(dt)` returns the final state flattened to numbers.
/// Needs at least three distinct step sizes (ConfigError otherwise).  Errors
/// that fail to decrease with dt make the probe inconclusive.
OrderProbeResult order_probe(const std::function<std::vector<double>(double)>& solve,
                             std::vector<double> dt_list);

}  // namespace chflow
