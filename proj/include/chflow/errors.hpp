#pragma once

#include <stdexcept>
#include <string>

namespace chflow {

/// Invalid sizes, mismatched grids, out-of-range parameters, malformed input files.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised by operations that need to invert the metric when kappa == 0.
class DegenerateMetricError : public std::domain_error {
 public:
  explicit DegenerateMetricError(const std::string& what) : std::domain_error(what) {}
};

/// Non-finite values met while evaluating a right-hand side.
class EvaluationError : public std::runtime_error {
 public:
  explicit EvaluationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace chflow
