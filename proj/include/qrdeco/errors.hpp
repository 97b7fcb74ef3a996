#pragma once

#include <stdexcept>
#include <string>

namespace qrdeco {

/// Input outside the domain of an operation (negative frequency, Re(q) <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid run configuration (unsupported dimensionality, malformed label, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Quadrature or root search that did not reach its tolerance.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, double error_estimate)
      : std::runtime_error(what + " (error estimate " + std::to_string(error_estimate) + ")"),
        error_estimate_(error_estimate) {}

  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double error_estimate_;
};

}  // namespace qrdeco
