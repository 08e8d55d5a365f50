#pragma once

// Right-hand sides of the evolution:
//   m_t   = alpha u_x - a u_x m - u m_x - kappa rho rho_x,   m = A u
//   rho_t = -u rho_x - (a - 1) u_x rho
//   alpha_t = 0
// plus the Lagrangian flow map phi_t = u o phi.

#include <optional>
#include <string>
#include <vector>

#include "chflow/lie_algebra.hpp"

namespace chflow {

struct ModelParams {
  double a = 2.0;
  double kappa = 1.0;
  double alpha = 0.0;
  double s = 2.0;

  MetricParams metric() const noexcept { return {kappa, s}; }
  /// Throws ConfigError on kappa < 0, s < 1 or non-finite values.  Returns
  /// warnings for admissible but unusual settings (a == 1).
  std::vector<std::string> validate() const;
};

/// phi(xi) = xi + d(xi) on the grid labels xi_j = j/n.
struct FlowMap {
  SpectralField displacement;

  static FlowMap identity(const PeriodicGrid& grid) { return {SpectralField(grid)}; }

  /// phi(xi_j), unwrapped (not reduced mod 1).
  std::vector<double> positions() const;
  /// phi_x = 1 + d_xi, spectrally.
  SpectralField jacobian() const;
  /// min phi_x on the oversampled label grid; positive for a diffeomorphism.
  double min_jacobian() const;
};

struct State {
  AlgebraElement U;
  double t = 0.0;
  std::optional<FlowMap> flow;

  static State initial(AlgebraElement U, bool with_flow_map);
  bool all_finite() const noexcept;
};

/// d/dt of the evolved components; dU.alpha is always 0.
struct StateDerivative {
  AlgebraElement dU;
  std::optional<SpectralField> dflow;
};

/// Direct momentum form for general a.  Throws EvaluationError on non-finite input.
AlgebraElement rhs_direct(const State& st, const ModelParams& p);

/// Geodesic (Arnold-Euler) form U_t = -B(U, U); requires a == 2.
/// With kappa > 0 the value is routed through bilinear_B; with kappa == 0 the
/// closed form
///   u_t = -A^{-1}[u_x A u + (u A u)_x - alpha u_x + kappa rho rho_x],  rho_t = -(u rho)_x
/// is used since the metric cannot be inverted.
AlgebraElement rhs_geodesic(const State& st, const ModelParams& p);

/// d_t(xi_j) = u(xi_j + d(xi_j)).
SpectralField rhs_flowmap(const FlowMap& flow, const SpectralField& u);

StateDerivative coupled_rhs(const State& st, const ModelParams& p);

/// st + h * k, with t advanced by h.
State advanced(const State& st, double h, const StateDerivative& k);
/// acc += c * k
void axpy(double c, const StateDerivative& k, StateDerivative& acc);

}  // namespace chflow
