#pragma once

// Fourier pseudospectral toolkit on the unit-length circle R/Z.
//
// Fields are expanded in the basis e^{2 pi i k x}; the derivative symbol is
// 2 pi i k and the inertia symbol is (1 + 4 pi^2 k^2)^s, so A = (1 - D^2)^s
// holds exactly and the circle integral of 1 equals 1.

#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace chflow {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Uniform grid x_j = j/n on R/Z.  n must be even and at least 8.
class PeriodicGrid {
 public:
  explicit PeriodicGrid(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return 1.0 / static_cast<double>(n_); }
  double point(std::size_t j) const noexcept { return static_cast<double>(j) * spacing(); }
  std::vector<double> points() const;

  /// Number of stored half-spectrum coefficients, k = 0..n/2.
  std::size_t spectrum_size() const noexcept { return n_ / 2 + 1; }

  /// Largest |k| retained by the 2/3 rule.
  std::size_t dealias_cutoff() const noexcept { return n_ / 3; }

  friend bool operator==(const PeriodicGrid&, const PeriodicGrid&) = default;

 private:
  std::size_t n_;
};

/// lambda_k = (1 + 4 pi^2 k^2)^s.  Serves A (s), A^{-1} (-s) and Lambda^s (s/2).
struct MultiplierSymbol {
  double s = 1.0;

  double operator()(long k) const noexcept;
};

/// Signed wavenumber of slot `index` in FFT ordering (0..n/2-1, then -n/2..-1).
long wavenumber(std::size_t index, std::size_t n) noexcept;

/// Full discrete Fourier coefficients c_k (normalised by 1/n), FFT ordering.
std::vector<Complex> to_spectral(const PeriodicGrid& grid, std::span<const double> samples);

/// Inverse of to_spectral.  Throws ConfigError on length mismatch or when the
/// coefficients are not conjugate-symmetric to within 1e-10 (relative), i.e.
/// the synthesised samples would carry an imaginary residue.
std::vector<double> to_physical(const PeriodicGrid& grid, std::span<const Complex> coeffs);

/// A real periodic function held both as samples and as its half spectrum.
///
/// Linear operations act on both representations, so no transform is needed
/// for axpy-style updates.  Products and multipliers recompute one side from
/// the other.
class SpectralField {
 public:
  /// Zero field.
  explicit SpectralField(const PeriodicGrid& grid);

  static SpectralField from_samples(const PeriodicGrid& grid, std::vector<double> samples);
  /// Coefficients for k = 0..n/2.  Imaginary parts of the k = 0 and k = n/2
  /// slots are dropped since they cannot belong to a real field.
  static SpectralField from_half_spectrum(const PeriodicGrid& grid, std::vector<Complex> half);
  static SpectralField constant(const PeriodicGrid& grid, double value);

  template <class Fn>
  static SpectralField sampled(const PeriodicGrid& grid, Fn&& fn) {
    std::vector<double> v(grid.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = fn(grid.point(j));
    return from_samples(grid, std::move(v));
  }

  const PeriodicGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return grid_.size(); }
  std::span<const double> samples() const noexcept { return samples_; }
  std::span<const Complex> half_spectrum() const noexcept { return half_; }

  /// c_k for -n/2 <= k <= n/2, using c_{-k} = conj(c_k).
  Complex coeff(long k) const;

  bool all_finite() const noexcept;
  double max_abs_sample() const noexcept;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double c) noexcept;
  /// this += c * other
  SpectralField& add_scaled(double c, const SpectralField& other);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double c, SpectralField a) { return a *= c; }
  friend SpectralField operator-(SpectralField a) { return a *= -1.0; }

 private:
  SpectralField(const PeriodicGrid& grid, std::vector<double> samples, std::vector<Complex> half);
  void require_same_grid(const SpectralField& other) const;

  PeriodicGrid grid_;
  std::vector<double> samples_;
  std::vector<Complex> half_;
};

SpectralField derivative(const SpectralField& f);

/// Multiply every mode by (1 + 4 pi^2 k^2)^s.  Constants are fixed for all s.
SpectralField apply_power(const SpectralField& f, double s);

/// Generic Fourier multiplier.  The symbol is evaluated for k = 0..n/2 and
/// mirrored by conjugation, so the result is always real.
SpectralField apply_multiplier(const SpectralField& f, const std::function<Complex(long)>& symbol);

/// Integral of f over the circle: the mean of the samples, equal to Re c_0.
double circle_integral(const SpectralField& f) noexcept;

/// Integral of f*g over the circle, by discrete Parseval.
double l2_inner(const SpectralField& f, const SpectralField& g);

/// Integral of f * A^s g = sum_k (1 + 4 pi^2 k^2)^s Re(f_k conj(g_k)).
double sobolev_inner(const SpectralField& f, const SpectralField& g, double s);

/// Integral of f * A^s f.
double sobolev_norm_sq(const SpectralField& f, double s);

/// Pointwise product followed by zeroing of every mode with |k| > n/3.
SpectralField dealiased_product(const SpectralField& f, const SpectralField& g);

/// Zero every mode with |k| > n/3.
SpectralField truncate_to_band(const SpectralField& f);

/// Evaluate the trigonometric interpolant at arbitrary points (wrapped mod 1)
/// by direct summation.
std::vector<double> interpolate(const SpectralField& f, std::span<const double> points);

/// Samples of the interpolant on a grid `factor` times finer (zero padding).
std::vector<double> oversampled_samples(const SpectralField& f, std::size_t factor = 4);

/// max |f| on the 4x oversampled grid.  An approximation of the true sup from
/// below; it never undercuts the coarse-grid maximum.
double sup_norm(const SpectralField& f);

/// min f on the 4x oversampled grid.
double oversampled_min(const SpectralField& f);

/// Fraction of sum |c_k|^2 carried by modes with |k| > n/3 (0 for the zero field).
double tail_energy_fraction(const SpectralField& f);

}  // namespace chflow
