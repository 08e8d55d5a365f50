#pragma once

// Operator-identity and property suite behind `chflow check`.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "chflow/diagnostics.hpp"

namespace chflow {

/// Random real field with modes 1 <= |k| <= kmax (default n/3), standard
/// normal coefficients damped by 1/(1+k)^decay, plus a random mean.
SpectralField random_band_limited(const PeriodicGrid& grid, std::mt19937_64& rng, double decay = 2.0,
                                  long kmax = -1);

/// Random algebra element built from random_band_limited fields and a
/// normal alpha.
AlgebraElement random_element(const PeriodicGrid& grid, std::mt19937_64& rng, double decay = 2.0);

struct CheckFixture {
  /// Symbol used for the inertia-operator checks; (k, s) -> lambda_k.
  std::function<Complex(long, double)> symbol = [](long k, double s) { return Complex(MultiplierSymbol{s}(k)); };
  std::size_t n = 64;
  std::size_t samples = 50;
  std::uint64_t seed = 20240917;
};

struct CheckOutcome {
  std::string name;
  double worst = 0.0;      // worst observed error, in the units of `tolerance`
  double tolerance = 0.0;
  bool passed = false;
};

std::vector<CheckOutcome> run_check_suite(const CheckFixture& fixture = {});

/// Prints the pass/fail table; returns 0 iff every check passed.
int run_check(std::ostream& out, const CheckFixture& fixture = {});

}  // namespace chflow
