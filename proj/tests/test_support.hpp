#pragma once

// Independent oracles for the unit tests: naive DFT and direct synthesis from
// explicit coefficient lists.  Nothing here calls into the FFT backend.

#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <vector>

#include "chflow/spectral.hpp"

namespace testing {

using chflow::Complex;
using chflow::kTwoPi;

/// Real trigonometric polynomial sum_k (a_k cos 2pi k x + b_k sin 2pi k x), k >= 0.
struct TrigPoly {
  std::map<long, std::pair<double, double>> terms;

  double operator()(double x) const {
    double v = 0.0;
    for (const auto& [k, ab] : terms) {
      v += ab.first * std::cos(kTwoPi * k * x) + ab.second * std::sin(kTwoPi * k * x);
    }
    return v;
  }

  /// Exact derivative.
  TrigPoly derivative() const {
    TrigPoly d;
    for (const auto& [k, ab] : terms) {
      if (k == 0) continue;
      const double w = kTwoPi * k;
      d.terms[k] = {w * ab.second, -w * ab.first};
    }
    return d;
  }

  /// Exact action of the multiplier (1 + 4 pi^2 k^2)^s.
  TrigPoly power(double s) const {
    TrigPoly d;
    for (const auto& [k, ab] : terms) {
      const double lam = std::pow(1.0 + kTwoPi * kTwoPi * k * k, s);
      d.terms[k] = {lam * ab.first, lam * ab.second};
    }
    return d;
  }

  /// Exact integral over [0,1).
  double mean() const {
    auto it = terms.find(0);
    return it == terms.end() ? 0.0 : it->second.first;
  }

  chflow::SpectralField on(const chflow::PeriodicGrid& grid) const {
    return chflow::SpectralField::sampled(grid, [this](double x) { return (*this)(x); });
  }
};

inline TrigPoly random_poly(std::mt19937_64& rng, long kmax, double decay = 1.5) {
  std::normal_distribution<double> normal;
  TrigPoly p;
  p.terms[0] = {normal(rng), 0.0};
  for (long k = 1; k <= kmax; ++k) {
    const double d = std::pow(1.0 + k, -decay);
    p.terms[k] = {d * normal(rng), d * normal(rng)};
  }
  return p;
}

/// c_k = (1/n) sum_j f_j e^{-2 pi i k j / n}, k in FFT order.
inline std::vector<Complex> naive_dft(const std::vector<double>& f) {
  const std::size_t n = f.size();
  std::vector<Complex> c(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      acc += f[j] * std::polar(1.0, -kTwoPi * static_cast<double>(k * j % n) / static_cast<double>(n));
    }
    c[k] = acc / static_cast<double>(n);
  }
  return c;
}

inline double max_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline double max_diff(const chflow::SpectralField& a, const chflow::SpectralField& b) {
  return max_diff(a.samples(), b.samples());
}

}  // namespace testing
