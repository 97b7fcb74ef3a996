#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bath.hpp"
#include "errors.hpp"
#include "special.hpp"

namespace qrdeco {

/// Coherence factor relative to the initial element: rho(t) = e^{-gamma + i phase} rho(0).
struct CoherenceValue {
  double gamma = 0.0;
  double phase = 0.0;

  double magnitude() const { return std::exp(-gamma); }
  CoherenceValue conj() const { return {gamma, -phase}; }
};

/// Two-qubit element families. OneDiffers: i_a = j_a, i_b != j_b.
/// BothDiffer: i_a != j_a, i_b != j_b.
enum class PairCase { OneDiffers, BothDiffer };

/// Plus: equal-sign elements (<11|rho|00>, or f = +1 for OneDiffers).
/// Minus: opposite-sign elements (<10|rho|01>, or f = -1).
enum class Branch { Plus, Minus };

enum class Regime { Quiet, Quantum, Thermal };

namespace closed {

inline void require_time(double tau) {
  if (!(tau >= 0.0)) throw DomainError("time must be >= 0");
}

inline void require_closed_form(const BathSpec& bath) {
  if (!bath.has_closed_form())
    throw ConfigError("closed form unavailable; use --method quadrature (d=" + std::to_string(bath.d()) + ")");
}

/// Ohmic single-qubit damping, low-temperature form:
/// c1 [2 theta tau atan(2 theta tau) + 1/2 ln((1 + tau^2) / (1 + 4 theta^2 tau^2))].
inline double gamma1_lowT(double c1, double theta, double tau) {
  const double u = std::abs(tau);
  const double a = 2.0 * theta * u;
  return c1 * (a * std::atan(a) + 0.5 * (std::log1p(u * u) - std::log1p(a * a)));
}

inline double gamma1_vacuum(double c1, double tau) { return 0.5 * c1 * std::log1p(tau * tau); }

/// Super-Ohmic vacuum damping c3 [1 - (1 - tau^2) / (1 + tau^2)^2].
inline double gamma3_vacuum(double c3, double tau) {
  const double u2 = tau * tau;
  // 1 - (1-u2)/(1+u2)^2 = u2 (3 + u2) / (1 + u2)^2
  return c3 * u2 * (3.0 + u2) / ((1.0 + u2) * (1.0 + u2));
}

/// Super-Ohmic thermal damping 2 c3 theta^2 [zeta(2, 1+theta) - Re zeta(2, 1+theta+i theta tau)].
inline double gamma3_thermal(double c3, double theta, double tau) {
  if (theta == 0.0 || tau == 0.0) return 0.0;
  const double a = 1.0 + theta;
  const double diff = hurwitz_zeta2(a).real() - hurwitz_zeta2(Complex{a, theta * std::abs(tau)}).real();
  return 2.0 * c3 * theta * theta * diff;
}

/// Exact super-Ohmic single-qubit damping at any temperature.
///
/// Evaluated as vacuum + thermal. With zeta(2, q) = zeta(2, q+1) + q^{-2} this
/// is term-by-term equal to
///   c3 {theta^2 [zeta(2,theta) + zeta(2,1+theta) - zeta(2,theta+i theta tau)
///        - zeta(2,theta-i theta tau)] + (1 - tau^2)/(1 + tau^2)^2},
/// and it vanishes at tau = 0 without a separate normalization.
inline double gamma3_exact(double c3, double theta, double tau) {
  return gamma3_vacuum(c3, tau) + gamma3_thermal(c3, theta, tau);
}

/// tau -> infinity limit of gamma3_exact.
inline double gamma3_limit(double c3, double theta) {
  if (theta == 0.0) return c3;
  return c3 * theta * theta * (hurwitz_zeta2(theta).real() + hurwitz_zeta2(1.0 + theta).real());
}

/// Single-qubit damping exponent from the closed forms (d = 1 is the low-T form).
inline double gamma_single(const BathSpec& bath, double tau) {
  require_closed_form(bath);
  return bath.d() == 1 ? gamma1_lowT(bath.c(), bath.theta(), tau) : gamma3_exact(bath.c(), bath.theta(), tau);
}

/// Phase integral  int I(x) s(x,tau) cos(x ts) dx.  At ts = 0 this is the
/// collective phase functional: c1 (tau - atan tau) or c3 (2 tau - sin(2 atan tau)/(1+tau^2)).
inline double theta_pair(const BathSpec& bath, double tau, double ts) {
  require_closed_form(bath);
  const double c = bath.c();
  const double tp = ts + tau;
  const double tm = ts - tau;
  if (bath.d() == 1)
    return c * (0.5 * std::atan(tm) - 0.5 * std::atan(tp) + tau / (1.0 + ts * ts));
  auto half_sin = [](double u) { return std::sin(2.0 * std::atan(u)) / (2.0 * (1.0 + u * u)); };
  const double s2 = 1.0 + ts * ts;
  return c * (half_sin(tm) - half_sin(tp) + 2.0 * tau * std::cos(3.0 * std::atan(ts)) / (s2 * std::sqrt(s2)));
}

/// Sine-weighted integral  int I(x) c(x,tau) sin(x lag) dx  (no thermal factor).
inline double lambda_pair(const BathSpec& bath, double tau, double lag) {
  require_closed_form(bath);
  const double c = bath.c();
  if (bath.d() == 1)
    return c * (std::atan(lag) - 0.5 * std::atan(lag + tau) - 0.5 * std::atan(lag - tau));
  auto k = [](double u) { return u / ((1.0 + u * u) * (1.0 + u * u)); };
  return c * (2.0 * k(lag) - k(lag + tau) - k(lag - tau));
}

inline double collective_phase(const BathSpec& bath, double tau) { return theta_pair(bath, tau, 0.0); }

/// Two-qubit independent coupling, Ohmic bath (low-temperature damping).
inline CoherenceValue pair_independent_d1(double c1, double theta, double tau, double ts, PairCase pc, Branch br) {
  require_time(tau);
  if (!(ts >= 0.0)) throw DomainError("transit time must be >= 0");
  const double sign = br == Branch::Plus ? 1.0 : -1.0;
  const double g = gamma1_lowT(c1, theta, tau);
  if (pc == PairCase::OneDiffers)
    return {g, sign * theta_pair(BathSpec(1, c1, theta), tau, ts)};

  const double tp = ts + tau;
  const double tm = ts - tau;
  const double w = 2.0 * theta;
  auto ln_ratio = [w](double u) { return std::log1p(u * u) - std::log1p(w * w * u * u); };
  const double logs = 0.25 * (-2.0 * ln_ratio(ts) + ln_ratio(tm) + ln_ratio(tp));
  const double lin = theta * (2.0 * ts * std::atan(w * ts) - tm * std::atan(w * tm) - tp * std::atan(w * tp));
  const double cross = 2.0 * c1 * (logs - lin);
  return {2.0 * g + sign * cross, 0.0};
}

/// Two-qubit independent coupling, super-Ohmic bath (exact at any temperature).
inline CoherenceValue pair_independent_d3(double c3, double theta, double tau, double ts, PairCase pc, Branch br) {
  require_time(tau);
  if (!(ts >= 0.0)) throw DomainError("transit time must be >= 0");
  const double sign = br == Branch::Plus ? 1.0 : -1.0;
  const double g = gamma3_exact(c3, theta, tau);
  if (pc == PairCase::OneDiffers)
    return {g, sign * theta_pair(BathSpec(3, c3, std::max(theta, 0.0)), tau, ts)};

  const double tp = ts + tau;
  const double tm = ts - tau;
  auto r = [](double u) {
    const double u2 = u * u;
    return (1.0 - u2) / ((1.0 + u2) * (1.0 + u2));
  };
  double bracket = -r(ts) + 0.5 * r(tp) + 0.5 * r(tm);
  if (theta > 0.0) {
    // theta^2/2 {2 zeta(th -+ i th ts) x2 - zeta(th +- i th t+) - zeta(th +- i th t-)}, real parts
    auto re2 = [theta](double u) { return 2.0 * hurwitz_zeta2(Complex{theta, theta * std::abs(u)}).real(); };
    bracket += 0.5 * theta * theta * (2.0 * re2(ts) - re2(tp) - re2(tm));
  } else {
    // theta -> 0: theta^2 zeta(2, theta(1 + i u)) -> 1 / (1 + i u)^2, real part r(u)
    bracket += 0.5 * (2.0 * 2.0 * r(ts) - 2.0 * r(tp) - 2.0 * r(tm));
  }
  return {2.0 * g + sign * 2.0 * c3 * bracket, 0.0};
}

inline CoherenceValue pair_independent(const BathSpec& bath, double tau, double ts, PairCase pc, Branch br) {
  require_closed_form(bath);
  return bath.d() == 1 ? pair_independent_d1(bath.c(), bath.theta(), tau, ts, pc, br)
                       : pair_independent_d3(bath.c(), bath.theta(), tau, ts, pc, br);
}

/// Two-qubit collective coupling. BothDiffer/Minus is the decoherence-free element.
inline CoherenceValue pair_collective(const BathSpec& bath, double tau, PairCase pc, Branch br) {
  require_closed_form(bath);
  require_time(tau);
  const double sign = br == Branch::Plus ? 1.0 : -1.0;
  if (pc == PairCase::OneDiffers) return {gamma_single(bath, tau), sign * collective_phase(bath, tau)};
  if (br == Branch::Minus) return {0.0, 0.0};
  return {4.0 * gamma_single(bath, tau), 0.0};
}

/// Ohmic low-temperature asymptotes: quiet (tau < 1), quantum (1 < tau < 1/theta),
/// thermal (tau >> 1/theta). Windows are documented, not enforced.
///
/// The thermal asymptote is the commonly quoted 2 c1 theta tau; the large-tau
/// limit of gamma1_lowT grows as pi c1 theta tau instead.
inline double regime_asymptote(double c1, double theta, double tau, Regime regime) {
  switch (regime) {
    case Regime::Quiet: return 0.5 * c1 * tau * tau;
    case Regime::Quantum: return c1 * std::log(tau);
    case Regime::Thermal: return 2.0 * c1 * theta * tau;
  }
  return 0.0;
}

inline double thermal_slope_lowT(double c1, double theta) { return std::numbers::pi * c1 * theta; }

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// tau -> infinity limit of the single-qubit exponent (infinite for d = 1).
inline double single_limit(const BathSpec& bath) {
  require_closed_form(bath);
  return bath.d() == 1 ? kUnbounded : gamma3_limit(bath.c(), bath.theta());
}

/// tau -> infinity limit of the two-qubit independent exponent.
///
/// BothDiffer/Minus tends to 2 Gamma(ts) for both baths: the growing parts of
/// Gamma(tau), Gamma(tau + ts) and Gamma(tau - ts) cancel.
inline double pair_independent_limit(const BathSpec& bath, double ts, PairCase pc, Branch br) {
  require_closed_form(bath);
  if (pc == PairCase::OneDiffers) return single_limit(bath);
  const double gts = gamma_single(bath, ts);
  if (br == Branch::Minus) return 2.0 * gts;
  if (bath.d() == 1) return kUnbounded;
  return 4.0 * gamma3_limit(bath.c(), bath.theta()) - 2.0 * gts;
}

inline double pair_collective_limit(const BathSpec& bath, PairCase pc, Branch br) {
  require_closed_form(bath);
  if (pc == PairCase::OneDiffers) return single_limit(bath);
  return br == Branch::Minus ? 0.0 : 4.0 * single_limit(bath);
}

}  // namespace closed
}  // namespace qrdeco
