#pragma once

#include <cmath>
#include <string>

#include "errors.hpp"

namespace qrdeco {

/// Bosonic bath in units where the cutoff frequency is 1.
///
/// Spectral density I(x) = c x^d e^{-x}; `theta` is k_B T / (hbar omega_c).
/// Times elsewhere in the library are omega_c t.
class BathSpec {
 public:
  BathSpec(int d, double c, double theta) : d_(d), c_(c), theta_(theta) {
    if (d < 1) throw ConfigError("bath dimensionality must be >= 1, got " + std::to_string(d));
    if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("coupling must be positive and finite");
    if (!(theta >= 0.0) || !std::isfinite(theta))
      throw ConfigError("temperature ratio must be >= 0 and finite");
  }

  int d() const noexcept { return d_; }
  double c() const noexcept { return c_; }
  double theta() const noexcept { return theta_; }

  /// Closed forms exist for the Ohmic (d=1) and super-Ohmic (d=3) baths only.
  bool has_closed_form() const noexcept { return d_ == 1 || d_ == 3; }

  BathSpec with_theta(double theta) const { return BathSpec(d_, c_, theta); }

 private:
  int d_;
  double c_;
  double theta_;
};

namespace detail {
// Below this value of x/theta the coth series is used.
inline constexpr double kCothSeriesCrossover = 1e-4;
}  // namespace detail

inline double spectral_density(const BathSpec& bath, double x) {
  if (!(x >= 0.0)) throw DomainError("spectral_density: frequency must be >= 0");
  return bath.c() * std::pow(x, bath.d()) * std::exp(-x);
}

/// coth(x / 2 theta), exactly 1 at theta = 0.
inline double thermal_weight(double theta, double x) {
  if (!(x > 0.0)) throw DomainError("thermal_weight: frequency must be > 0");
  if (theta == 0.0) return 1.0;
  const double y = x / (2.0 * theta);
  if (y < detail::kCothSeriesCrossover) return 1.0 / y + y / 3.0;
  if (y > 20.0) return 1.0 + 2.0 * std::exp(-2.0 * y);
  return 1.0 / std::tanh(y);
}

/// Bose-Einstein occupation 1 / (e^{x/theta} - 1).
inline double occupation(double theta, double x) {
  if (!(x > 0.0)) throw DomainError("occupation: frequency must be > 0");
  if (theta == 0.0) return 0.0;
  return 1.0 / std::expm1(x / theta);
}

}  // namespace qrdeco
