#include "chflow/lie_algebra.hpp"

#include <cmath>
#include <string>

#include "chflow/errors.hpp"

namespace chflow {

bool AlgebraElement::all_finite() const noexcept {
  return u.all_finite() && rho.all_finite() && std::isfinite(alpha);
}

void AlgebraElement::validate() const {
  if (!(u.grid() == rho.grid())) throw ConfigError("u and rho must share one grid");
  if (!all_finite()) throw ConfigError("algebra element contains non-finite values");
}

AlgebraElement& AlgebraElement::add_scaled(double c, const AlgebraElement& other) {
  u.add_scaled(c, other.u);
  rho.add_scaled(c, other.rho);
  alpha += c * other.alpha;
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(double c) {
  u *= c;
  rho *= c;
  alpha *= c;
  return *this;
}

void MetricParams::validate() const {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw ConfigError("kappa must satisfy kappa >= 0 (got " + std::to_string(kappa) + ")");
  }
  if (!(s >= 1.0) || !std::isfinite(s)) throw ConfigError("s must satisfy s >= 1 (got " + std::to_string(s) + ")");
}

double inner_product(const AlgebraElement& U1, const AlgebraElement& U2, const MetricParams& p) {
  return sobolev_inner(U1.u, U2.u, p.s) + p.kappa * l2_inner(U1.rho, U2.rho) -
         0.5 * (U2.alpha * circle_integral(U1.u) + U1.alpha * circle_integral(U2.u)) +
         0.5 * U1.alpha * U2.alpha;
}

double metric_norm_sq(const AlgebraElement& U, const MetricParams& p) {
  return sobolev_norm_sq(U.u, p.s) + p.kappa * l2_inner(U.rho, U.rho) - U.alpha * circle_integral(U.u) +
         0.5 * U.alpha * U.alpha;
}

DualElement inertia_apply(const AlgebraElement& U, const MetricParams& p) {
  SpectralField f = apply_power(U.u, p.s);
  f -= SpectralField::constant(U.grid(), 0.5 * U.alpha);
  return {std::move(f), p.kappa * U.rho, 0.5 * (U.alpha - circle_integral(U.u))};
}

AlgebraElement inertia_invert(const DualElement& F, const MetricParams& p) {
  if (!(p.kappa > 0.0)) {
    throw DegenerateMetricError("inertia operator is not invertible for kappa = 0 (rho component)");
  }
  const double mean_f = circle_integral(F.f);
  SpectralField u = apply_power(F.f, -p.s);
  u += SpectralField::constant(F.f.grid(), 2.0 * F.h + mean_f);
  return {std::move(u), (1.0 / p.kappa) * F.g, 4.0 * F.h + 2.0 * mean_f};
}

AlgebraElement ad(const AlgebraElement& U1, const AlgebraElement& U2) {
  const SpectralField u1x = derivative(U1.u);
  const SpectralField u2x = derivative(U2.u);
  SpectralField du = dealiased_product(u1x, U2.u) - dealiased_product(U1.u, u2x);
  SpectralField drho =
      dealiased_product(derivative(U1.rho), U2.u) - dealiased_product(derivative(U2.rho), U1.u);
  return {std::move(du), std::move(drho), 0.0};
}

AlgebraElement ad_transpose(const AlgebraElement& U1, const AlgebraElement& U3, const MetricParams& p) {
  if (!(p.kappa > 0.0)) throw DegenerateMetricError("ad_transpose requires kappa > 0");
  const SpectralField u1x = derivative(U1.u);
  const SpectralField Au3 = apply_power(U3.u, p.s);

  SpectralField f = dealiased_product(u1x, Au3);
  f += derivative(dealiased_product(U1.u, Au3));
  f.add_scaled(p.kappa, dealiased_product(derivative(U1.rho), U3.rho));
  f.add_scaled(-U3.alpha, u1x);
  SpectralField g = p.kappa * derivative(dealiased_product(U1.u, U3.rho));

  return inertia_invert({std::move(f), std::move(g), 0.0}, p);
}

AlgebraElement bilinear_B(const AlgebraElement& U1, const AlgebraElement& U2, const MetricParams& p) {
  AlgebraElement out = ad_transpose(U1, U2, p);
  out.add_scaled(1.0, ad_transpose(U2, U1, p));
  out *= 0.5;
  return out;
}

}  // namespace chflow
