#include "chflow/time_integration.hpp"

#include <algorithm>
#include <limits>

namespace chflow {

void StepperConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("stepper.dt must satisfy dt > 0");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ConfigError("stepper.t_end must satisfy t_end > 0");
  if (t_end < dt * (1.0 - 1e-12)) throw ConfigError("stepper.t_end must satisfy t_end >= dt");
  if (sample_every == 0) throw ConfigError("stepper.sample_every must be a positive integer");
}

std::size_t StepperConfig::step_count() const {
  const double ratio = t_end / dt;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)) return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::ceil(ratio));
}

void BlowupThresholds::validate() const {
  if (!(slope_limit > 0.0)) throw ConfigError("thresholds.slope_limit must be > 0");
  if (!(tail_fraction_limit > 0.0 && tail_fraction_limit < 1.0)) {
    throw ConfigError("thresholds.tail_fraction_limit must lie in (0, 1)");
  }
}

std::string to_string(BlowupReason reason) {
  switch (reason) {
    case BlowupReason::none: return "none";
    case BlowupReason::non_finite: return "non_finite";
    case BlowupReason::slope: return "slope";
    case BlowupReason::spectral_tail: return "spectral_tail";
  }
  return "unknown";
}

State rk4_step(const State& st, double dt, const ModelParams& p) {
  return rk4_step([&p](const State& y) { return coupled_rhs(y, p); }, st, dt);
}

BlowupStatus detect_blowup(const State& st, const BlowupThresholds& thresholds) {
  BlowupStatus status;
  if (!st.all_finite()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {true, BlowupReason::non_finite, nan, nan};
  }
  status.min_ux = oversampled_min(derivative(st.U.u));
  status.tail_fraction = std::max(tail_energy_fraction(st.U.u), tail_energy_fraction(st.U.rho));
  if (status.min_ux < -thresholds.slope_limit) {
    status.triggered = true;
    status.reason = BlowupReason::slope;
  } else if (status.tail_fraction > thresholds.tail_fraction_limit) {
    status.triggered = true;
    status.reason = BlowupReason::spectral_tail;
  }
  return status;
}

Trajectory advance(const State& st0, const ModelParams& p, const StepperConfig& cfg,
                   const BlowupThresholds& thresholds) {
  cfg.validate();
  thresholds.validate();
  st0.U.validate();

  Trajectory traj;
  auto record = [&traj](std::size_t step, const State& st, const BlowupStatus& status) {
    traj.steps.push_back(step);
    traj.times.push_back(st.t);
    traj.states.push_back(st);
    traj.monitors.push_back(status);
  };

  State st = st0;
  BlowupStatus status = detect_blowup(st, thresholds);
  if (status.triggered) {
    if (st.all_finite()) record(0, st, status);
    traj.termination = {false, status.reason, st.t};
    return traj;
  }
  record(0, st, status);

  const std::size_t steps = cfg.step_count();
  const double t_final = st0.t + cfg.t_end;
  for (std::size_t k = 1; k <= steps; ++k) {
    const double h = std::min(cfg.dt, t_final - st.t);
    State next = st;
    try {
      next = rk4_step(st, h, p);
    } catch (const EvaluationError&) {
      traj.termination = {false, BlowupReason::non_finite, st.t};
      traj.steps_taken = k - 1;
      return traj;
    }
    next.t = (k == steps) ? t_final : st0.t + static_cast<double>(k) * cfg.dt;
    status = detect_blowup(next, thresholds);
    if (status.triggered) {
      if (next.all_finite()) {
        record(k, next, status);
        traj.termination = {false, status.reason, next.t};
        traj.steps_taken = k;
      } else {
        traj.termination = {false, status.reason, st.t};
        traj.steps_taken = k - 1;
      }
      return traj;
    }
    st = std::move(next);
    if (k % cfg.sample_every == 0 || k == steps) record(k, st, status);
  }
  traj.termination = {true, BlowupReason::none, st.t};
  traj.steps_taken = steps;
  return traj;
}

OrderProbeResult order_probe(const std::function<std::vector<double>(double)>& solve,
                             std::vector<double> dt_list) {
  std::sort(dt_list.begin(), dt_list.end(), std::greater<>());
  dt_list.erase(std::unique(dt_list.begin(), dt_list.end()), dt_list.end());
  if (dt_list.size() < 3) throw ConfigError("order_probe needs at least three distinct step sizes");
  for (double dt : dt_list) {
    if (!(dt > 0.0)) throw ConfigError("order_probe: step sizes must be positive");
  }

  OrderProbeResult result;
  result.dts = dt_list;
  const std::vector<double> reference = solve(dt_list.back());
  double scale = 0.0;
  for (double v : reference) scale = std::max(scale, std::abs(v));

  for (std::size_t i = 0; i + 1 < dt_list.size(); ++i) {
    const auto y = solve(dt_list[i]);
    if (y.size() != reference.size()) throw ConfigError("order_probe: solution sizes differ between runs");
    double err = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) err = std::max(err, std::abs(y[j] - reference[j]));
    result.errors.push_back(err);
  }
  for (std::size_t i = 0; i + 1 < result.errors.size(); ++i) {
    result.orders.push_back(std::log(result.errors[i] / result.errors[i + 1]) /
                            std::log(dt_list[i] / dt_list[i + 1]));
  }

  const double noise_floor = 1e-13 * std::max(scale, 1.0);
  bool monotone = true;
  for (std::size_t i = 0; i + 1 < result.errors.size(); ++i) {
    if (!(result.errors[i] > result.errors[i + 1])) monotone = false;
  }
  if (!monotone) {
    result.note = "errors do not decrease with dt";
  } else if (result.errors.back() <= noise_floor) {
    result.note = "finest error is at round-off level";
  } else {
    result.conclusive = true;
    result.measured_order = result.orders.back();
  }
  return result;
}

}  // namespace chflow
