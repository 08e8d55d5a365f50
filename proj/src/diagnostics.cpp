#include "chflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chflow {
namespace {

void require_samples(const Trajectory& traj) {
  if (traj.states.empty()) throw ConfigError("trajectory has no samples");
}

void require_flow(const Trajectory& traj) {
  require_samples(traj);
  for (const auto& st : traj.states) {
    if (!st.flow) throw ConfigError("monitor needs a trajectory with the flow map enabled");
  }
}

double magnitude_power(double base, double exponent) {
  // phi_x <= 0 only for a degenerate flow; keep the magnitude so the report stays finite.
  return std::pow(std::abs(base), exponent);
}

}  // namespace

std::vector<double> metric_norm_drift(const Trajectory& traj, const ModelParams& p) {
  require_samples(traj);
  const MetricParams metric = p.metric();
  const double e0 = metric_norm_sq(traj.states.front().U, metric);
  const double denom = std::max(std::abs(e0), kDriftFloor);
  std::vector<double> out;
  out.reserve(traj.states.size());
  for (const auto& st : traj.states) out.push_back(std::abs(metric_norm_sq(st.U, metric) - e0) / denom);
  return out;
}

std::vector<double> mean_velocity_drift(const Trajectory& traj) {
  require_samples(traj);
  const double m0 = circle_integral(traj.states.front().U.u);
  std::vector<double> out;
  out.reserve(traj.states.size());
  for (const auto& st : traj.states) out.push_back(std::abs(circle_integral(st.U.u) - m0));
  return out;
}

std::vector<double> lagrangian_invariant(const Trajectory& traj, const ModelParams& p) {
  require_flow(traj);
  const State& first = traj.states.front();
  const auto rho0 = first.U.rho.samples();
  const auto jac0 = first.flow->jacobian();
  const double exponent = p.a - 1.0;

  std::vector<double> initial(rho0.size());
  for (std::size_t j = 0; j < initial.size(); ++j) {
    initial[j] = rho0[j] * magnitude_power(jac0.samples()[j], exponent);
  }

  std::vector<double> out;
  out.reserve(traj.states.size());
  for (const auto& st : traj.states) {
    const auto rho_on_flow = interpolate(st.U.rho, st.flow->positions());
    const auto jac = st.flow->jacobian();
    double dev = 0.0;
    for (std::size_t j = 0; j < initial.size(); ++j) {
      const double now = rho_on_flow[j] * magnitude_power(jac.samples()[j], exponent);
      dev = std::max(dev, std::abs(now - initial[j]));
    }
    out.push_back(dev);
  }
  return out;
}

std::vector<double> rho_positivity(const Trajectory& traj) {
  require_samples(traj);
  std::vector<double> out;
  out.reserve(traj.states.size());
  for (const auto& st : traj.states) out.push_back(oversampled_min(st.U.rho));
  return out;
}

StretchSeries stretch_bound(const Trajectory& traj) {
  require_flow(traj);
  StretchSeries series;
  const double t0 = traj.states.front().t;
  double running_k = 0.0;
  double gamma0 = 0.0;
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const State& st = traj.states[i];
    const auto jac = st.flow->jacobian();
    double gamma = 0.0;
    for (double v : jac.samples()) {
      if (v <= 0.0) {
        series.degenerate = true;
        continue;
      }
      gamma = std::max(gamma, 1.0 / v);
    }
    running_k = std::max(running_k, sup_norm(derivative(st.U.u)));
    if (i == 0) gamma0 = gamma;
    const double bound = gamma0 * std::exp(running_k * (st.t - t0));
    series.gamma.push_back(gamma);
    series.bound.push_back(bound);
    series.ratio.push_back(bound > 0.0 ? gamma / bound : 0.0);
  }
  return series;
}

double sobolev_ladder(const AlgebraElement& U, const ModelParams& p, unsigned k) {
  const SpectralField m = apply_power(U.u, p.s);
  return sobolev_norm_sq(m, static_cast<double>(k)) + sobolev_norm_sq(U.rho, static_cast<double>(k + 1));
}

AprioriResult apriori_check(const AlgebraElement& U, const MetricParams& p) {
  AprioriResult r;
  r.lhs = 0.75 * sobolev_norm_sq(U.u, p.s) + p.kappa * l2_inner(U.rho, U.rho);
  r.rhs = metric_norm_sq(U, p) + 0.5 * U.alpha * U.alpha;
  r.slack = r.rhs - r.lhs;
  r.scale = 1.0 + std::max(std::abs(r.lhs), std::abs(r.rhs));
  r.holds = r.slack >= -1e-10 * r.scale;
  return r;
}

bool DiagnosticReport::passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const MonitorCheck& c) { return c.passed; });
}

DiagnosticReport build_report(const Trajectory& traj, const ModelParams& p, const DiagnosticTolerances& tol) {
  require_samples(traj);
  const bool with_flow =
      std::all_of(traj.states.begin(), traj.states.end(), [](const State& st) { return st.flow.has_value(); });
  const MetricParams metric = p.metric();

  const auto drift = metric_norm_drift(traj, p);
  const auto mean_drift = mean_velocity_drift(traj);
  const auto min_rho = rho_positivity(traj);
  std::optional<std::vector<double>> lagrangian;
  std::optional<StretchSeries> stretch;
  if (with_flow) {
    lagrangian = lagrangian_invariant(traj, p);
    stretch = stretch_bound(traj);
  }

  DiagnosticReport rep;
  rep.rows.reserve(traj.states.size());
  rep.min_apriori_slack = std::numeric_limits<double>::infinity();
  double worst_apriori_ratio = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const State& st = traj.states[i];
    const SpectralField ux = derivative(st.U.u);
    DiagnosticRow row;
    row.t = st.t;
    row.metric_norm_sq = metric_norm_sq(st.U, metric);
    row.metric_drift = drift[i];
    row.mean_u = circle_integral(st.U.u);
    row.min_rho = min_rho[i];
    row.sup_ux = sup_norm(ux);
    row.min_ux = oversampled_min(ux);
    if (lagrangian) row.lagrangian_dev = (*lagrangian)[i];
    if (stretch) row.stretch_ratio = stretch->ratio[i];
    row.ladder_k0 = sobolev_ladder(st.U, p, 0);
    row.ladder_k1 = sobolev_ladder(st.U, p, 1);
    row.tail_fraction = std::max(tail_energy_fraction(st.U.u), tail_energy_fraction(st.U.rho));
    const AprioriResult ap = apriori_check(st.U, metric);
    row.apriori_slack = ap.slack;
    worst_apriori_ratio = std::max(worst_apriori_ratio, -ap.slack / ap.scale);
    rep.rows.push_back(row);

    rep.max_metric_drift = std::max(rep.max_metric_drift, row.metric_drift);
    rep.max_mean_drift = std::max(rep.max_mean_drift, mean_drift[i]);
    rep.max_sup_ux = std::max(rep.max_sup_ux, row.sup_ux);
    rep.min_min_ux = i == 0 ? row.min_ux : std::min(rep.min_min_ux, row.min_ux);
    rep.min_rho = i == 0 ? row.min_rho : std::min(rep.min_rho, row.min_rho);
    rep.max_ladder_k0 = std::max(rep.max_ladder_k0, row.ladder_k0);
    rep.max_ladder_k1 = std::max(rep.max_ladder_k1, row.ladder_k1);
    rep.max_tail_fraction = std::max(rep.max_tail_fraction, row.tail_fraction);
    rep.min_apriori_slack = std::min(rep.min_apriori_slack, row.apriori_slack);
  }
  rep.initial_min_rho = min_rho.front();
  if (lagrangian) rep.max_lagrangian_dev = *std::max_element(lagrangian->begin(), lagrangian->end());
  if (stretch) {
    rep.max_stretch_ratio = *std::max_element(stretch->ratio.begin(), stretch->ratio.end());
    rep.flow_degenerate = stretch->degenerate;
  }

  const bool metric_case = p.a == 2.0;
  auto check = [&rep](std::string name, double value, double limit, bool asserted) {
    rep.checks.push_back({std::move(name), value, limit, asserted, !asserted || value <= limit});
  };
  check("metric_norm_drift", rep.max_metric_drift, tol.metric_drift, metric_case);
  check("mean_velocity_drift", rep.max_mean_drift, tol.mean_drift, metric_case);
  if (lagrangian) {
    const double rho0_sup = sup_norm(traj.states.front().U.rho);
    check("lagrangian_invariant", *rep.max_lagrangian_dev, tol.lagrangian * (1.0 + rho0_sup), true);
  }
  // Positivity is asserted only under its hypothesis min rho_0 > 0; expressed
  // as -min rho <= 0 with a strict inequality handled below.
  {
    const bool asserted = rep.initial_min_rho > 0.0;
    MonitorCheck c{"rho_positivity", rep.min_rho, 0.0, asserted, !asserted || rep.min_rho > 0.0};
    rep.checks.push_back(c);
  }
  if (stretch) {
    check("stretch_bound", *rep.max_stretch_ratio, 1.0 + tol.stretch_slack, true);
    rep.checks.push_back({"flow_orientation", rep.flow_degenerate ? 1.0 : 0.0, 0.0, true, !rep.flow_degenerate});
  }
  check("apriori_inequality", worst_apriori_ratio, tol.apriori, true);
  return rep;
}

}  // namespace chflow
