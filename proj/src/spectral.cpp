#include "chflow/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "chflow/errors.hpp"

namespace chflow {
namespace {

// FFTW planning is not thread-safe; execution through the new-array interface
// is.  Plans are created once per size under a lock and never destroyed.
struct PlanPair {
  fftw_plan forward;
  fftw_plan backward;
};

const PlanPair& plans_for(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  const int size = static_cast<int>(n);
  std::vector<double> real(n);
  std::vector<Complex> spec(n / 2 + 1);
  auto* c = reinterpret_cast<fftw_complex*>(spec.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p{fftw_plan_dft_r2c_1d(size, real.data(), c, flags),
             fftw_plan_dft_c2r_1d(size, c, real.data(), flags | FFTW_DESTROY_INPUT)};
  return cache.emplace(n, p).first->second;
}

// Normalised half spectrum c_k = (1/n) sum_j f_j e^{-2 pi i k j / n}.
std::vector<Complex> forward_half(std::span<const double> samples) {
  const std::size_t n = samples.size();
  std::vector<double> in(samples.begin(), samples.end());
  std::vector<Complex> out(n / 2 + 1);
  fftw_execute_dft_r2c(plans_for(n).forward, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& c : out) c *= scale;
  return out;
}

// Samples of sum_k c_k e^{2 pi i k x_j}, with c given as a half spectrum of length n/2+1.
std::vector<double> backward_half(std::span<const Complex> half, std::size_t n) {
  std::vector<Complex> work(half.begin(), half.end());
  work.front().imag(0.0);
  work.back().imag(0.0);
  std::vector<double> out(n);
  fftw_execute_dft_c2r(plans_for(n).backward, reinterpret_cast<fftw_complex*>(work.data()), out.data());
  return out;
}

double relative_scale(std::span<const Complex> c) {
  double m = 0.0;
  for (const auto& z : c) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

PeriodicGrid::PeriodicGrid(std::size_t n) : n_(n) {
  if (n < 8 || n % 2 != 0) {
    throw ConfigError("grid size n must be even and >= 8 (got " + std::to_string(n) + ")");
  }
}

std::vector<double> PeriodicGrid::points() const {
  std::vector<double> x(n_);
  for (std::size_t j = 0; j < n_; ++j) x[j] = point(j);
  return x;
}

double MultiplierSymbol::operator()(long k) const noexcept {
  const double kk = static_cast<double>(k);
  return std::exp(s * std::log1p(kTwoPi * kTwoPi * kk * kk));
}

long wavenumber(std::size_t index, std::size_t n) noexcept {
  const auto i = static_cast<long>(index);
  const auto nn = static_cast<long>(n);
  return i < nn / 2 ? i : i - nn;
}

std::vector<Complex> to_spectral(const PeriodicGrid& grid, std::span<const double> samples) {
  const std::size_t n = grid.size();
  if (samples.size() != n) {
    throw ConfigError("to_spectral: expected " + std::to_string(n) + " samples, got " +
                      std::to_string(samples.size()));
  }
  const auto half = forward_half(samples);
  std::vector<Complex> full(n);
  for (std::size_t k = 0; k <= n / 2; ++k) full[k % n] = half[k];
  for (std::size_t k = 1; k < n / 2; ++k) full[n - k] = std::conj(half[k]);
  // slot n/2 holds k = -n/2, which for real data equals the (real) c_{n/2}
  full[n / 2] = half[n / 2];
  return full;
}

std::vector<double> to_physical(const PeriodicGrid& grid, std::span<const Complex> coeffs) {
  const std::size_t n = grid.size();
  if (coeffs.size() != n) {
    throw ConfigError("to_physical: expected " + std::to_string(n) + " coefficients, got " +
                      std::to_string(coeffs.size()));
  }
  const double scale = relative_scale(coeffs);
  double residue = std::abs(coeffs[0].imag()) + std::abs(coeffs[n / 2].imag());
  for (std::size_t k = 1; k < n / 2; ++k) {
    residue = std::max(residue, std::abs(coeffs[n - k] - std::conj(coeffs[k])));
  }
  if (residue > 1e-10 * std::max(scale, 1e-300)) {
    throw ConfigError("to_physical: coefficients are not conjugate-symmetric (residue " +
                      std::to_string(residue) + ")");
  }
  std::vector<Complex> half(n / 2 + 1);
  half[0] = coeffs[0];
  for (std::size_t k = 1; k < n / 2; ++k) half[k] = 0.5 * (coeffs[k] + std::conj(coeffs[n - k]));
  half[n / 2] = coeffs[n / 2];
  return backward_half(half, n);
}

// ---------------------------------------------------------------------------

SpectralField::SpectralField(const PeriodicGrid& grid)
    : grid_(grid), samples_(grid.size(), 0.0), half_(grid.spectrum_size()) {}

SpectralField::SpectralField(const PeriodicGrid& grid, std::vector<double> samples,
                             std::vector<Complex> half)
    : grid_(grid), samples_(std::move(samples)), half_(std::move(half)) {}

SpectralField SpectralField::from_samples(const PeriodicGrid& grid, std::vector<double> samples) {
  if (samples.size() != grid.size()) {
    throw ConfigError("field length " + std::to_string(samples.size()) + " does not match grid size " +
                      std::to_string(grid.size()));
  }
  auto half = forward_half(samples);
  return SpectralField(grid, std::move(samples), std::move(half));
}

SpectralField SpectralField::from_half_spectrum(const PeriodicGrid& grid, std::vector<Complex> half) {
  if (half.size() != grid.spectrum_size()) {
    throw ConfigError("half spectrum length " + std::to_string(half.size()) + " does not match grid (" +
                      std::to_string(grid.spectrum_size()) + ")");
  }
  half.front().imag(0.0);
  half.back().imag(0.0);
  auto samples = backward_half(half, grid.size());
  return SpectralField(grid, std::move(samples), std::move(half));
}

SpectralField SpectralField::constant(const PeriodicGrid& grid, double value) {
  SpectralField f(grid);
  std::fill(f.samples_.begin(), f.samples_.end(), value);
  f.half_[0] = value;
  return f;
}

Complex SpectralField::coeff(long k) const {
  const long half_n = static_cast<long>(size() / 2);
  if (k < -half_n || k > half_n) {
    throw ConfigError("wavenumber " + std::to_string(k) + " outside [-n/2, n/2]");
  }
  return k >= 0 ? half_[static_cast<std::size_t>(k)] : std::conj(half_[static_cast<std::size_t>(-k)]);
}

bool SpectralField::all_finite() const noexcept {
  return std::all_of(samples_.begin(), samples_.end(), [](double v) { return std::isfinite(v); });
}

double SpectralField::max_abs_sample() const noexcept {
  double m = 0.0;
  for (double v : samples_) m = std::max(m, std::abs(v));
  return m;
}

void SpectralField::require_same_grid(const SpectralField& other) const {
  if (!(grid_ == other.grid_)) {
    throw ConfigError("fields live on different grids (n=" + std::to_string(size()) + " vs n=" +
                      std::to_string(other.size()) + ")");
  }
}

SpectralField& SpectralField::operator+=(const SpectralField& other) { return add_scaled(1.0, other); }

SpectralField& SpectralField::operator-=(const SpectralField& other) { return add_scaled(-1.0, other); }

SpectralField& SpectralField::operator*=(double c) noexcept {
  for (auto& v : samples_) v *= c;
  for (auto& z : half_) z *= c;
  return *this;
}

SpectralField& SpectralField::add_scaled(double c, const SpectralField& other) {
  require_same_grid(other);
  for (std::size_t j = 0; j < samples_.size(); ++j) samples_[j] += c * other.samples_[j];
  for (std::size_t k = 0; k < half_.size(); ++k) half_[k] += c * other.half_[k];
  return *this;
}

// ---------------------------------------------------------------------------

SpectralField derivative(const SpectralField& f) {
  const auto in = f.half_spectrum();
  std::vector<Complex> out(in.size());
  // The Nyquist mode has no real-valued derivative on the grid; it is dropped.
  for (std::size_t k = 0; k + 1 < in.size(); ++k) {
    out[k] = in[k] * Complex(0.0, kTwoPi * static_cast<double>(k));
  }
  return SpectralField::from_half_spectrum(f.grid(), std::move(out));
}

SpectralField apply_power(const SpectralField& f, double s) {
  const MultiplierSymbol symbol{s};
  const auto in = f.half_spectrum();
  std::vector<Complex> out(in.size());
  for (std::size_t k = 0; k < in.size(); ++k) out[k] = in[k] * symbol(static_cast<long>(k));
  return SpectralField::from_half_spectrum(f.grid(), std::move(out));
}

SpectralField apply_multiplier(const SpectralField& f, const std::function<Complex(long)>& symbol) {
  const auto in = f.half_spectrum();
  std::vector<Complex> out(in.size());
  for (std::size_t k = 0; k < in.size(); ++k) out[k] = in[k] * symbol(static_cast<long>(k));
  return SpectralField::from_half_spectrum(f.grid(), std::move(out));
}

double circle_integral(const SpectralField& f) noexcept { return f.half_spectrum()[0].real(); }

namespace {

template <class Weight>
double weighted_pairing(const SpectralField& f, const SpectralField& g, Weight&& weight) {
  if (!(f.grid() == g.grid())) throw ConfigError("pairing of fields on different grids");
  const auto a = f.half_spectrum();
  const auto b = g.half_spectrum();
  const std::size_t last = a.size() - 1;
  double sum = weight(0) * a[0].real() * b[0].real();
  for (std::size_t k = 1; k < last; ++k) {
    sum += 2.0 * weight(static_cast<long>(k)) * (a[k].real() * b[k].real() + a[k].imag() * b[k].imag());
  }
  sum += weight(static_cast<long>(last)) * a[last].real() * b[last].real();
  return sum;
}

}  // namespace

double l2_inner(const SpectralField& f, const SpectralField& g) {
  return weighted_pairing(f, g, [](long) { return 1.0; });
}

double sobolev_inner(const SpectralField& f, const SpectralField& g, double s) {
  return weighted_pairing(f, g, MultiplierSymbol{s});
}

double sobolev_norm_sq(const SpectralField& f, double s) { return sobolev_inner(f, f, s); }

SpectralField truncate_to_band(const SpectralField& f) {
  std::vector<Complex> half(f.half_spectrum().begin(), f.half_spectrum().end());
  for (std::size_t k = f.grid().dealias_cutoff() + 1; k < half.size(); ++k) half[k] = 0.0;
  return SpectralField::from_half_spectrum(f.grid(), std::move(half));
}

SpectralField dealiased_product(const SpectralField& f, const SpectralField& g) {
  if (!(f.grid() == g.grid())) throw ConfigError("dealiased_product: fields on different grids");
  const auto a = f.samples();
  const auto b = g.samples();
  std::vector<double> prod(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) prod[j] = a[j] * b[j];
  auto half = forward_half(prod);
  for (std::size_t k = f.grid().dealias_cutoff() + 1; k < half.size(); ++k) half[k] = 0.0;
  return SpectralField::from_half_spectrum(f.grid(), std::move(half));
}

std::vector<double> interpolate(const SpectralField& f, std::span<const double> points) {
  const auto c = f.half_spectrum();
  const std::size_t nyquist = c.size() - 1;

  // Highest populated mode below Nyquist; band-limited fields stop well short of it.
  std::size_t top = nyquist - 1;
  while (top > 0 && c[top] == Complex(0.0, 0.0)) --top;

  constexpr std::size_t kBlock = 64;
  constexpr std::size_t kReseed = 64;
  std::vector<double> out(points.size());
  double wr[kBlock], wi[kBlock], er[kBlock], ei[kBlock], acc[kBlock], x[kBlock];

  for (std::size_t start = 0; start < points.size(); start += kBlock) {
    const std::size_t len = std::min(kBlock, points.size() - start);
    for (std::size_t i = 0; i < len; ++i) {
      x[i] = points[start + i] - std::floor(points[start + i]);
      wr[i] = std::cos(kTwoPi * x[i]);
      wi[i] = std::sin(kTwoPi * x[i]);
      er[i] = 1.0;
      ei[i] = 0.0;
      acc[i] = 0.0;
    }
    for (std::size_t k = 1; k <= top; ++k) {
      if (k % kReseed == 0) {
        for (std::size_t i = 0; i < len; ++i) {
          er[i] = std::cos(kTwoPi * static_cast<double>(k) * x[i]);
          ei[i] = std::sin(kTwoPi * static_cast<double>(k) * x[i]);
        }
      } else {
        for (std::size_t i = 0; i < len; ++i) {
          const double r = er[i] * wr[i] - ei[i] * wi[i];
          ei[i] = er[i] * wi[i] + ei[i] * wr[i];
          er[i] = r;
        }
      }
      const double cr = c[k].real();
      const double ci = c[k].imag();
      for (std::size_t i = 0; i < len; ++i) acc[i] += cr * er[i] - ci * ei[i];
    }
    const double cn = c[nyquist].real();
    for (std::size_t i = 0; i < len; ++i) {
      double v = c[0].real() + 2.0 * acc[i];
      if (cn != 0.0) v += cn * std::cos(std::numbers::pi * static_cast<double>(2 * nyquist) * x[i]);
      out[start + i] = v;
    }
  }
  return out;
}

std::vector<double> oversampled_samples(const SpectralField& f, std::size_t factor) {
  if (factor == 0) throw ConfigError("oversampling factor must be positive");
  const std::size_t n = f.size();
  const std::size_t m = n * factor;
  const auto c = f.half_spectrum();
  std::vector<Complex> padded(m / 2 + 1);
  std::copy(c.begin(), c.end() - 1, padded.begin());
  // The Nyquist coefficient splits evenly between +n/2 and -n/2 once the grid is refined.
  padded[n / 2] += (factor == 1 ? 1.0 : 0.5) * c.back();
  return backward_half(padded, m);
}

double sup_norm(const SpectralField& f) {
  double m = f.max_abs_sample();
  for (double v : oversampled_samples(f, 4)) m = std::max(m, std::abs(v));
  return m;
}

double oversampled_min(const SpectralField& f) {
  const auto s = f.samples();
  double m = *std::min_element(s.begin(), s.end());
  for (double v : oversampled_samples(f, 4)) m = std::min(m, v);
  return m;
}

double tail_energy_fraction(const SpectralField& f) {
  const auto c = f.half_spectrum();
  const std::size_t cut = f.grid().dealias_cutoff();
  const std::size_t last = c.size() - 1;
  double total = 0.0;
  double tail = 0.0;
  for (std::size_t k = 0; k <= last; ++k) {
    const double w = (k == 0 || k == last) ? 1.0 : 2.0;
    const double e = w * std::norm(c[k]);
    total += e;
    if (k > cut) tail += e;
  }
  return total > 0.0 ? tail / total : 0.0;
}

}  // namespace chflow
