#include "chflow/dynamics.hpp"

#include <cmath>

#include "chflow/errors.hpp"

namespace chflow {

std::vector<std::string> ModelParams::validate() const {
  if (!std::isfinite(a) || !std::isfinite(alpha)) throw ConfigError("model parameters a and alpha must be finite");
  metric().validate();
  std::vector<std::string> warnings;
  if (a == 1.0) {
    warnings.emplace_back("a = 1 lies outside the family a != 1; the rho equation reduces to pure transport");
  }
  return warnings;
}

std::vector<double> FlowMap::positions() const {
  const auto d = displacement.samples();
  const auto& grid = displacement.grid();
  std::vector<double> x(d.size());
  for (std::size_t j = 0; j < d.size(); ++j) x[j] = grid.point(j) + d[j];
  return x;
}

SpectralField FlowMap::jacobian() const {
  return derivative(displacement) + SpectralField::constant(displacement.grid(), 1.0);
}

double FlowMap::min_jacobian() const { return oversampled_min(jacobian()); }

State State::initial(AlgebraElement U, bool with_flow_map) {
  State st{std::move(U), 0.0, std::nullopt};
  if (with_flow_map) st.flow = FlowMap::identity(st.U.grid());
  return st;
}

bool State::all_finite() const noexcept {
  return U.all_finite() && std::isfinite(t) && (!flow || flow->displacement.all_finite());
}

namespace {

void require_finite(const State& st, const char* who) {
  if (!st.U.all_finite()) throw EvaluationError(std::string(who) + ": non-finite state");
}

}  // namespace

AlgebraElement rhs_direct(const State& st, const ModelParams& p) {
  require_finite(st, "rhs_direct");
  const auto& u = st.U.u;
  const auto& rho = st.U.rho;
  const SpectralField m = apply_power(u, p.s);
  const SpectralField ux = derivative(u);
  const SpectralField mx = derivative(m);
  const SpectralField rhox = derivative(rho);

  SpectralField mdot = st.U.alpha * ux;
  mdot.add_scaled(-p.a, dealiased_product(ux, m));
  mdot -= dealiased_product(u, mx);
  mdot.add_scaled(-p.kappa, dealiased_product(rho, rhox));
  // int m_t vanishes identically (int u_x A u = int rho rho_x = 0, int u m_x = -int u_x m)
  // but the computed mode carries roundoff of order eps |u_x m|, which accumulates
  // into a visible mean drift over long runs at s >= 2.
  mdot -= SpectralField::constant(u.grid(), circle_integral(mdot));

  SpectralField rhodot = -dealiased_product(u, rhox);
  rhodot.add_scaled(-(p.a - 1.0), dealiased_product(ux, rho));

  return {apply_power(mdot, -p.s), std::move(rhodot), 0.0};
}

AlgebraElement rhs_geodesic(const State& st, const ModelParams& p) {
  if (p.a != 2.0) throw ConfigError("rhs_geodesic is defined for a = 2 only");
  require_finite(st, "rhs_geodesic");
  const MetricParams metric = p.metric();
  if (metric.kappa > 0.0) return -1.0 * bilinear_B(st.U, st.U, metric);

  const auto& u = st.U.u;
  const auto& rho = st.U.rho;
  const SpectralField Au = apply_power(u, p.s);
  const SpectralField ux = derivative(u);
  SpectralField bracket = dealiased_product(ux, Au);
  bracket += derivative(dealiased_product(u, Au));
  bracket.add_scaled(-st.U.alpha, ux);
  bracket.add_scaled(p.kappa, dealiased_product(rho, derivative(rho)));
  return {-apply_power(bracket, -p.s), -derivative(dealiased_product(u, rho)), 0.0};
}

SpectralField rhs_flowmap(const FlowMap& flow, const SpectralField& u) {
  return SpectralField::from_samples(u.grid(), interpolate(u, flow.positions()));
}

StateDerivative coupled_rhs(const State& st, const ModelParams& p) {
  StateDerivative out{rhs_direct(st, p), std::nullopt};
  if (st.flow) {
    if (!st.flow->displacement.all_finite()) throw EvaluationError("coupled_rhs: non-finite flow map");
    out.dflow = rhs_flowmap(*st.flow, st.U.u);
  }
  return out;
}

State advanced(const State& st, double h, const StateDerivative& k) {
  State out = st;
  out.U.u.add_scaled(h, k.dU.u);
  out.U.rho.add_scaled(h, k.dU.rho);
  // alpha is a parameter of the motion; k.dU.alpha is zero by construction.
  if (out.flow && k.dflow) out.flow->displacement.add_scaled(h, *k.dflow);
  out.t = st.t + h;
  return out;
}

void axpy(double c, const StateDerivative& k, StateDerivative& acc) {
  acc.dU.add_scaled(c, k.dU);
  if (acc.dflow && k.dflow) acc.dflow->add_scaled(c, *k.dflow);
}

}  // namespace chflow
