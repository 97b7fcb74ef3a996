#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bath.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "label.hpp"

namespace qrdeco {

/// Damping exponent and the two phase functionals at one time point.
struct DecoherenceFunctions {
  double gamma = 0.0;
  double theta_phase = 0.0;
  double lambda_phase = 0.0;
  double aleph = 0.0;  // theta_phase - lambda_phase
};

struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  std::size_t max_subdivisions = 20'000'000;
  double cutoff_multiplier = 60.0;
};

/// Which part of coth(x/2theta) = 1 + 2<N> enters the damping integral.
enum class Fluctuations { Total, Vacuum, Thermal };

/// (x tau - sin x tau) / x^2; the limit 0 at x = 0.
inline double kernel_s(double x, double tau) {
  const double y = x * tau;
  if (std::abs(y) < 1e-2) {
    const double y2 = y * y;
    // (y - sin y) / x^2 = tau^3 x (1/6 - y^2/120 + y^4/5040 - y^6/362880)
    return tau * tau * tau * x * (1.0 / 6 - y2 * (1.0 / 120 - y2 * (1.0 / 5040 - y2 / 362880)));
  }
  return (y - std::sin(y)) / (x * x);
}

/// (1 - cos x tau) / x^2, written as 2 sin^2(x tau / 2) / x^2; tau^2/2 at x = 0.
inline double kernel_c(double x, double tau) {
  if (x == 0.0) return 0.5 * tau * tau;
  const double h = std::sin(0.5 * x * tau) / x;
  return 2.0 * h * h;
}

namespace detail {

struct Term {
  double weight;
  double lag;
};

// Sum_k w_k cos(x lag_k) (or sin) plus a constant.
struct TrigSeries {
  double constant = 0.0;
  std::vector<Term> terms;

  bool empty() const { return constant == 0.0 && terms.empty(); }
  double abs_sum() const {
    double s = std::abs(constant);
    for (const auto& t : terms) s += std::abs(t.weight);
    return s;
  }
  double max_lag() const {
    double m = 0.0;
    for (const auto& t : terms) m = std::max(m, std::abs(t.lag));
    return m;
  }
  double cos_at(double x) const {
    double s = constant;
    for (const auto& t : terms) s += t.weight * std::cos(x * t.lag);
    return s;
  }
  double sin_at(double x) const {
    double s = constant;
    for (const auto& t : terms) s += t.weight * std::sin(x * t.lag);
    return s;
  }
};

inline void check_sizes(const RegisterGeometry& geometry, const CoherenceLabel& label) {
  if (geometry.size() != label.size())
    throw ConfigError("geometry has " + std::to_string(geometry.size()) + " qubits, label has " +
                      std::to_string(label.size()));
}

inline TrigSeries damping_series(const RegisterGeometry& g, const CoherenceLabel& l) {
  TrigSeries s;
  const std::size_t L = l.size();
  for (std::size_t m = 0; m < L; ++m) {
    const double dm = l.i(m) - l.j(m);
    s.constant += dm * dm;
    for (std::size_t n = m + 1; n < L; ++n) {
      const double w = 2.0 * dm * (l.i(n) - l.j(n));
      if (w != 0.0) s.terms.push_back({w, g.lag(m, n)});
    }
  }
  return s;
}

inline TrigSeries theta_series(const RegisterGeometry& g, const CoherenceLabel& l) {
  TrigSeries s;
  for (std::size_t m = 0; m < l.size(); ++m)
    for (std::size_t n = m + 1; n < l.size(); ++n) {
      const double w = 2.0 * (l.i(m) * l.i(n) - l.j(m) * l.j(n));
      if (w != 0.0) s.terms.push_back({w, g.lag(m, n)});
    }
  return s;
}

// Ordered-pair sum i_m j_n sin(x lag_mn) folded onto m < n; lag is antisymmetric.
inline TrigSeries lambda_series(const RegisterGeometry& g, const CoherenceLabel& l) {
  TrigSeries s;
  for (std::size_t m = 0; m < l.size(); ++m)
    for (std::size_t n = m + 1; n < l.size(); ++n) {
      const double w = l.i(m) * l.j(n) - l.i(n) * l.j(m);
      if (w != 0.0 && g.lag(m, n) != 0.0) s.terms.push_back({w, g.lag(m, n)});
    }
  return s;
}

inline double fluctuation_weight(Fluctuations part, double theta, double x) {
  switch (part) {
    case Fluctuations::Vacuum: return 1.0;
    case Fluctuations::Thermal: return 2.0 * occupation(theta, x);
    case Fluctuations::Total: break;
  }
  return thermal_weight(theta, x);
}

// Upper bound on int_{x0}^inf x^k e^{-x} dx, valid for x0 >= max(1, 2k).
inline double incomplete_gamma_bound(double k, double x0) { return 2.0 * std::pow(x0, k) * std::exp(-x0); }

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
};

// Integrates f over (0, inf) on panels of width ~ pi / max_freq, stopping once
// tail_bound(x0) is below tolerance or the cutoff is reached.
template <class F, class TailBound>
QuadratureResult integrate_panels(F&& f, double max_freq, double feature_scale, TailBound&& tail_bound,
                                  double cutoff, const QuadratureConfig& cfg, int d = 3) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 21>;
  constexpr unsigned kMaxDepth = 12;

  const double period = max_freq > 0.0 ? std::numbers::pi / max_freq : 2.0;
  const double step = std::min(period, 2.0);
  const double span = std::min(cutoff, 80.0);

  const std::size_t expected = static_cast<std::size_t>(std::ceil(span / step));
  if (expected > cfg.max_subdivisions)
    throw NumericalFailure("quadrature needs ~" + std::to_string(expected) +
                               " panels, above max_subdivisions",
                           std::numeric_limits<double>::infinity());

  // Boost reports the depth-0 error on the reference interval [-1, 1]; rescale to [a, b].
  auto rule = [&](double a, double b) {
    QuadratureResult r;
    r.value = Rule::integrate(f, a, b, 0, 0.0, &r.error, &r.l1);
    r.error *= 0.5 * (b - a);
    return r;
  };
  // Bisection against a per-panel share of the global tolerance. Stops when
  // halving no longer shrinks the estimate (cancellation noise).
  auto refine = [&](auto&& self, double a, double b, QuadratureResult whole, unsigned depth) -> QuadratureResult {
    const double target = 0.5 * (cfg.rel_tol * whole.l1 + cfg.abs_tol * (b - a) / span);
    if (whole.error <= target || depth == 0) return whole;
    const double m = 0.5 * (a + b);
    QuadratureResult l = rule(a, m), r = rule(m, b);
    if (l.error + r.error < whole.error) {
      l = self(self, a, m, l, depth - 1);
      r = self(self, m, b, r, depth - 1);
    }
    return {l.value + r.value, l.error + r.error, l.l1 + r.l1};
  };

  QuadratureResult out;
  auto panel = [&](double a, double b) {
    const QuadratureResult r = refine(refine, a, b, rule(a, b), kMaxDepth);
    out.value += r.value;
    out.error += r.error;
    out.l1 += r.l1;
  };

  // Geometric panels resolve the x -> 0 structure (coth on the scale theta).
  double x = 0.0;
  double g = std::min({feature_scale, step, 1.0}) / 64.0;
  panel(0.0, g);
  x = g;
  while (x * 4.0 < step) {
    panel(x, x * 4.0);
    x *= 4.0;
  }
  panel(x, step);
  x = step;

  std::size_t count = 0;
  const double x_min_stop = std::max(8.0, 2.0 * (d + 1));
  while (x < cutoff) {
    if (x >= x_min_stop) {
      const double tail = tail_bound(x);
      if (tail < 0.1 * std::max(cfg.abs_tol, cfg.rel_tol * std::abs(out.value))) break;
    }
    const double b = std::min(x + step, cutoff);
    panel(x, b);
    x = b;
    if (++count > cfg.max_subdivisions)
      throw NumericalFailure("quadrature exceeded max_subdivisions", out.error);
  }
  if (x >= cutoff) out.error += tail_bound(cutoff);

  const double tol = std::max(cfg.abs_tol, cfg.rel_tol * out.l1);
  if (!(out.error <= tol) || !std::isfinite(out.value))
    throw NumericalFailure("quadrature did not converge", out.error);
  return out;
}

inline double cutoff_for(const BathSpec& bath, const QuadratureConfig& cfg) {
  return cfg.cutoff_multiplier * std::max(1.0, bath.theta());
}

inline double feature_scale_for(const BathSpec& bath) {
  return bath.theta() > 0.0 ? std::min(1.0, bath.theta()) : 1.0;
}

// Integral of I(x) kernel_c(x, tau) w(x) B(x) with B a cosine or sine series.
template <bool Sine>
double integrate_c_kernel(const BathSpec& bath, const TrigSeries& series, double tau, Fluctuations part,
                          const QuadratureConfig& cfg) {
  if (tau == 0.0 || series.empty()) return 0.0;
  if (part == Fluctuations::Thermal && bath.theta() == 0.0) return 0.0;
  const double theta = bath.theta();
  auto f = [&](double x) {
    const double b = Sine ? series.sin_at(x) : series.cos_at(x);
    return spectral_density(bath, x) * kernel_c(x, tau) * fluctuation_weight(part, theta, x) * b;
  };
  const double w = series.abs_sum();
  auto tail = [&](double x0) {
    const double fw = part == Fluctuations::Vacuum ? 1.0 : fluctuation_weight(part, theta, x0);
    return bath.c() * w * fw * 2.0 * incomplete_gamma_bound(bath.d() - 2.0, x0);
  };
  const double freq = std::abs(tau) + series.max_lag();
  return integrate_panels(f, freq, feature_scale_for(bath), tail, cutoff_for(bath, cfg), cfg, bath.d()).value;
}

}  // namespace detail

/// Damping exponent for independent coupling: the cos(x t_s) cross terms
/// run over pairs m < n with the factor 2.
inline double gamma_independent(const BathSpec& bath, const RegisterGeometry& geometry,
                                const CoherenceLabel& label, double tau, const QuadratureConfig& cfg = {},
                                Fluctuations part = Fluctuations::Total) {
  detail::check_sizes(geometry, label);
  if (!(tau >= 0.0)) throw DomainError("time must be >= 0");
  const auto series = detail::damping_series(geometry, label);
  const double g = detail::integrate_c_kernel<false>(bath, series, tau, part, cfg);
  if (g < 0.0) {
    if (g < -1e-12 * std::max(1.0, series.abs_sum()))
      throw NumericalFailure("negative damping exponent", -g);
    return 0.0;
  }
  return g;
}

/// Phase functional built on s(x, tau), weights 2 (i_m i_n - j_m j_n) over m < n.
inline double theta_independent(const BathSpec& bath, const RegisterGeometry& geometry,
                                const CoherenceLabel& label, double tau, const QuadratureConfig& cfg = {}) {
  detail::check_sizes(geometry, label);
  if (!(tau >= 0.0)) throw DomainError("time must be >= 0");
  const auto series = detail::theta_series(geometry, label);
  if (tau == 0.0 || series.empty()) return 0.0;
  auto f = [&](double x) { return spectral_density(bath, x) * kernel_s(x, tau) * series.cos_at(x); };
  const double w = series.abs_sum();
  auto tail = [&](double x0) {
    return bath.c() * w *
           (tau * detail::incomplete_gamma_bound(bath.d() - 1.0, x0) +
            detail::incomplete_gamma_bound(bath.d() - 2.0, x0));
  };
  return detail::integrate_panels(f, tau + series.max_lag(), detail::feature_scale_for(bath), tail,
                                  detail::cutoff_for(bath, cfg), cfg, bath.d())
      .value;
}

/// Phase functional built on c(x, tau): 2 sum_{m != n} i_m j_n sin(x lag_mn).
inline double lambda_independent(const BathSpec& bath, const RegisterGeometry& geometry,
                                 const CoherenceLabel& label, double tau, const QuadratureConfig& cfg = {}) {
  detail::check_sizes(geometry, label);
  if (!(tau >= 0.0)) throw DomainError("time must be >= 0");
  const auto series = detail::lambda_series(geometry, label);
  // No thermal factor in the phase terms.
  const BathSpec vacuum = bath.with_theta(0.0);
  return 2.0 * detail::integrate_c_kernel<true>(vacuum, series, tau, Fluctuations::Total, cfg);
}

inline DecoherenceFunctions decoherence_functions_independent(const BathSpec& bath,
                                                              const RegisterGeometry& geometry,
                                                              const CoherenceLabel& label, double tau,
                                                              const QuadratureConfig& cfg = {}) {
  DecoherenceFunctions out;
  out.gamma = gamma_independent(bath, geometry, label, tau, cfg);
  out.theta_phase = theta_independent(bath, geometry, label, tau, cfg);
  out.lambda_phase = lambda_independent(bath, geometry, label, tau, cfg);
  out.aleph = out.theta_phase - out.lambda_phase;
  return out;
}

/// Register-independent damping functional for collective coupling.
inline double gamma_collective(const BathSpec& bath, double tau, const QuadratureConfig& cfg = {},
                               Fluctuations part = Fluctuations::Total) {
  if (!(tau >= 0.0)) throw DomainError("time must be >= 0");
  detail::TrigSeries one;
  one.constant = 1.0;
  return std::max(0.0, detail::integrate_c_kernel<false>(bath, one, tau, part, cfg));
}

inline double theta_collective(const BathSpec& bath, double tau, const QuadratureConfig& cfg = {}) {
  if (!(tau >= 0.0)) throw DomainError("time must be >= 0");
  if (tau == 0.0) return 0.0;
  auto f = [&](double x) { return spectral_density(bath, x) * kernel_s(x, tau); };
  auto tail = [&](double x0) {
    return bath.c() * (tau * detail::incomplete_gamma_bound(bath.d() - 1.0, x0) +
                       detail::incomplete_gamma_bound(bath.d() - 2.0, x0));
  };
  return detail::integrate_panels(f, tau, detail::feature_scale_for(bath), tail, detail::cutoff_for(bath, cfg),
                                  cfg, bath.d())
      .value;
}

/// Single-qubit damping; identical to the collective functional.
inline double gamma_single(const BathSpec& bath, double tau, const QuadratureConfig& cfg = {},
                           Fluctuations part = Fluctuations::Total) {
  return gamma_collective(bath, tau, cfg, part);
}

}  // namespace qrdeco
