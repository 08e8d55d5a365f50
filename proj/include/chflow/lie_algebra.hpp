#pragma once

// Lie-algebra layer of the semidirect product Diff(S) x C^inf(S) x R: the
// metric pairing, the inertia operator and its inverse, ad, its metric
// adjoint, and the symmetrised bilinear map B.

#include "chflow/spectral.hpp"

namespace chflow {

/// U = (u, rho, alpha): velocity, density-like field, vorticity constant.
struct AlgebraElement {
  SpectralField u;
  SpectralField rho;
  double alpha = 0.0;

  static AlgebraElement zero(const PeriodicGrid& grid) {
    return {SpectralField(grid), SpectralField(grid), 0.0};
  }

  const PeriodicGrid& grid() const noexcept { return u.grid(); }
  bool all_finite() const noexcept;
  /// Throws ConfigError unless u and rho share a grid and every value is finite.
  void validate() const;

  AlgebraElement& add_scaled(double c, const AlgebraElement& other);
  AlgebraElement& operator*=(double c);
  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a.add_scaled(1.0, b); }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a.add_scaled(-1.0, b); }
  friend AlgebraElement operator*(double c, AlgebraElement a) { return a *= c; }
};

/// Momentum-side triple (f, g, h), the image of the inertia operator.
struct DualElement {
  SpectralField f;
  SpectralField g;
  double h = 0.0;
};

struct MetricParams {
  double kappa = 1.0;
  double s = 1.0;

  /// kappa >= 0, s >= 1.
  void validate() const;
};

/// <U1, U2> = int u1 A u2 + kappa int rho1 rho2 - 1/2 int (alpha2 u1 + alpha1 u2) + alpha1 alpha2 / 2
double inner_product(const AlgebraElement& U1, const AlgebraElement& U2, const MetricParams& p);

/// ||U||^2 = int u A u + kappa int rho^2 - alpha int u + alpha^2 / 2.
double metric_norm_sq(const AlgebraElement& U, const MetricParams& p);

/// (A u - alpha/2, kappa rho, (alpha - int u) / 2)
DualElement inertia_apply(const AlgebraElement& U, const MetricParams& p);

/// Solves inertia_apply(U) = F:
///   u = A^{-1} f + (2h + int f), rho = g / kappa, alpha = 4h + 2 int f.
/// Throws DegenerateMetricError when kappa == 0.
AlgebraElement inertia_invert(const DualElement& F, const MetricParams& p);

/// ad_{U1} U2 = (u1_x u2 - u1 u2_x, rho1_x u2 - rho2_x u1, 0), products dealiased.
AlgebraElement ad(const AlgebraElement& U1, const AlgebraElement& U2);

/// The metric adjoint: <ad_{U1} U2, U3> = <U2, ad_transpose(U1, U3)> for every U2.
///
/// Built from the dual element (f, g, 0) that represents U2 -> <ad_{U1} U2, U3>
/// under the plain L2 pairing, then pulled back through inertia_invert.
AlgebraElement ad_transpose(const AlgebraElement& U1, const AlgebraElement& U3, const MetricParams& p);

/// B(U1, U2) = (ad^T_{U1} U2 + ad^T_{U2} U1) / 2.
AlgebraElement bilinear_B(const AlgebraElement& U1, const AlgebraElement& U2, const MetricParams& p);

}  // namespace chflow
