#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "bath.hpp"
#include "closedform.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "kernels.hpp"
#include "label.hpp"

namespace qrdeco {

/// How continuum coherences are evaluated. Oracle (discrete modes) has its own entry point.
enum class Method { Closed, Quadrature, Oracle };

/// One bath mode: frequency, coupling weight |g_k|^2 and the phase k.r_n at every qubit.
struct Mode {
  double x = 0.0;
  double weight = 0.0;
  std::vector<double> phases;
};

struct ModeSet {
  std::size_t qubits = 0;
  std::vector<Mode> modes;

  void add(Mode m) {
    if (!(m.x > 0.0) || !std::isfinite(m.x)) throw ConfigError("mode frequency must be > 0");
    if (!(m.weight >= 0.0) || !std::isfinite(m.weight)) throw ConfigError("mode weight must be >= 0");
    if (m.phases.size() != qubits)
      throw ConfigError("mode has " + std::to_string(m.phases.size()) + " phases, expected " +
                        std::to_string(qubits));
    modes.push_back(std::move(m));
  }
};

struct RegisterCoherence {
  DecoherenceFunctions functions;
  CoherenceValue value;
};

inline RegisterCoherence make_coherence(const DecoherenceFunctions& f) {
  return {f, CoherenceValue{f.gamma, f.aleph}};
}

/// Exact finite-mode coherence factor.
///
/// gamma = sum_k w_k coth(x_k/2theta) c(x_k,tau) sum_mn (i_m-j_m)(i_n-j_n) cos(dphi_mn)
/// theta = sum_k w_k s(x_k,tau) sum_mn (i_m i_n - j_m j_n) cos(dphi_mn)
/// lambda = 2 sum_k w_k c(x_k,tau) sum_mn i_m j_n sin(dphi_mn)
/// with dphi_mn = phases[m] - phases[n] and phase = theta - lambda.
/// `warning`, when given, is set if the mode set is empty.
inline RegisterCoherence coherence_discrete(const ModeSet& modes, const CoherenceLabel& label, double theta,
                                            double tau, std::string* warning = nullptr) {
  if (!(tau >= 0.0)) throw DomainError("time must be >= 0");
  if (!(theta >= 0.0)) throw ConfigError("theta must be >= 0");
  if (modes.modes.empty()) {
    if (warning) *warning = "empty mode set";
    return make_coherence({});
  }
  if (modes.qubits != label.size()) throw ConfigError("mode set and label cover different registers");
  const std::size_t L = label.size();
  std::vector<double> di(L), ii(L), jj(L);
  for (std::size_t n = 0; n < L; ++n) {
    ii[n] = label.i(n);
    jj[n] = label.j(n);
    di[n] = ii[n] - jj[n];
  }
  DecoherenceFunctions f;
  for (const auto& mode : modes.modes) {
    double damp = 0.0, cosp = 0.0, sinp = 0.0;
    for (std::size_t m = 0; m < L; ++m) {
      damp += di[m] * di[m];
      for (std::size_t n = m + 1; n < L; ++n) {
        const double dphi = mode.phases[m] - mode.phases[n];
        const double c = std::cos(dphi), s = std::sin(dphi);
        damp += 2.0 * di[m] * di[n] * c;
        cosp += 2.0 * (ii[m] * ii[n] - jj[m] * jj[n]) * c;
        sinp += (ii[m] * jj[n] - ii[n] * jj[m]) * s;
      }
    }
    const double kc = kernel_c(mode.x, tau);
    f.gamma += mode.weight * thermal_weight(theta, mode.x) * kc * damp;
    f.theta_phase += mode.weight * kernel_s(mode.x, tau) * cosp;
    f.lambda_phase += 2.0 * mode.weight * kc * sinp;
  }
  f.aleph = f.theta_phase - f.lambda_phase;
  return make_coherence(f);
}

/// Positions along the propagation axis reproducing the geometry's lags (first qubit at 0).
inline std::vector<double> collinear_positions(const RegisterGeometry& g) {
  std::vector<double> p(g.size(), 0.0);
  for (std::size_t n = 1; n < g.size(); ++n) p[n] = -g.lag(0, n);
  for (std::size_t m = 0; m < g.size(); ++m)
    for (std::size_t n = 0; n < g.size(); ++n)
      if (std::abs(p[m] - p[n] - g.lag(m, n)) > 1e-9 * std::max(1.0, g.transit(m, n)))
        throw ConfigError("geometry is not collinear; supply per-mode phases instead");
  return p;
}

/// Right-endpoint Riemann sampling of I(x) on (0, xmax]: x_k = k xmax / N,
/// weight I(x_k) xmax / N, phases x_k * position_n.
inline ModeSet riemann_modes(const BathSpec& bath, const std::vector<double>& positions, std::size_t count,
                             double xmax = 60.0) {
  if (count == 0) throw ConfigError("mode count must be >= 1");
  if (!(xmax > 0.0)) throw ConfigError("mode cutoff must be > 0");
  ModeSet out;
  out.qubits = positions.size();
  out.modes.reserve(count);
  const double dx = xmax / static_cast<double>(count);
  for (std::size_t k = 1; k <= count; ++k) {
    Mode m;
    m.x = dx * static_cast<double>(k);
    m.weight = spectral_density(bath, m.x) * dx;
    m.phases.reserve(positions.size());
    for (double p : positions) m.phases.push_back(m.x * p);
    out.add(std::move(m));
  }
  return out;
}

namespace detail {

// Pairwise closed-form assembly. Gamma cross terms use
// int I coth c(x,tau) cos(x t) = Gamma(t+tau)/2 + Gamma(|t-tau|)/2 - Gamma(t).
inline DecoherenceFunctions independent_closed(const BathSpec& bath, const RegisterGeometry& g,
                                               const CoherenceLabel& l, double tau) {
  closed::require_closed_form(bath);
  DecoherenceFunctions f;
  const std::size_t L = l.size();
  const double g_tau = closed::gamma_single(bath, tau);
  for (std::size_t m = 0; m < L; ++m) {
    const double dm = l.i(m) - l.j(m);
    f.gamma += dm * dm * g_tau;
    for (std::size_t n = m + 1; n < L; ++n) {
      const double t = g.transit(m, n);
      const double dd = dm * (l.i(n) - l.j(n));
      if (dd != 0.0) {
        const double cross = 0.5 * closed::gamma_single(bath, t + tau) +
                             0.5 * closed::gamma_single(bath, std::abs(t - tau)) - closed::gamma_single(bath, t);
        f.gamma += 2.0 * dd * cross;
      }
      const double wt = 2.0 * (l.i(m) * l.i(n) - l.j(m) * l.j(n));
      if (wt != 0.0) f.theta_phase += wt * closed::theta_pair(bath, tau, t);
      const double wl = l.i(m) * l.j(n) - l.i(n) * l.j(m);
      if (wl != 0.0) f.lambda_phase += 2.0 * wl * closed::lambda_pair(bath, tau, g.lag(m, n));
    }
  }
  f.gamma = std::max(0.0, f.gamma);
  f.aleph = f.theta_phase - f.lambda_phase;
  return f;
}

}  // namespace detail

/// Continuum coherence factor for position-dependent (independent) coupling.
inline RegisterCoherence coherence_independent(const BathSpec& bath, const RegisterGeometry& geometry,
                                               const CoherenceLabel& label, double tau,
                                               Method method = Method::Quadrature,
                                               const QuadratureConfig& cfg = {}) {
  detail::check_sizes(geometry, label);
  if (!(tau >= 0.0)) throw DomainError("time must be >= 0");
  switch (method) {
    case Method::Closed: return make_coherence(detail::independent_closed(bath, geometry, label, tau));
    case Method::Quadrature:
      return make_coherence(decoherence_functions_independent(bath, geometry, label, tau, cfg));
    case Method::Oracle: break;
  }
  throw ConfigError("oracle evaluation needs a mode set");
}

struct DfsInfo {
  bool dfs = false;
  double damping_weight = 0.0;  // [sum (i - j)]^2
  double phase_weight = 0.0;    // (sum i)^2 - (sum j)^2
};

inline DfsInfo dfs_classify(const CoherenceLabel& label) {
  double si = 0.0, sj = 0.0;
  for (std::size_t n = 0; n < label.size(); ++n) {
    si += label.i(n);
    sj += label.j(n);
  }
  DfsInfo out;
  out.damping_weight = (si - sj) * (si - sj);
  out.phase_weight = si * si - sj * sj;
  out.dfs = out.damping_weight == 0.0 && out.phase_weight == 0.0;
  return out;
}

/// Collective coupling: damping [sum(i-j)]^2 Gamma_d, phase [(sum i)^2 - (sum j)^2] Theta_d.
inline RegisterCoherence coherence_collective(const BathSpec& bath, const CoherenceLabel& label, double tau,
                                              Method method = Method::Quadrature,
                                              const QuadratureConfig& cfg = {}) {
  if (!(tau >= 0.0)) throw DomainError("time must be >= 0");
  const DfsInfo w = dfs_classify(label);
  DecoherenceFunctions f;
  if (method == Method::Oracle) throw ConfigError("oracle evaluation needs a mode set");
  const bool use_closed = method == Method::Closed;
  if (w.damping_weight != 0.0)
    f.gamma = w.damping_weight *
              (use_closed ? closed::gamma_single(bath, tau) : gamma_collective(bath, tau, cfg));
  if (w.phase_weight != 0.0)
    f.theta_phase = w.phase_weight *
                    (use_closed ? closed::collective_phase(bath, tau) : theta_collective(bath, tau, cfg));
  f.aleph = f.theta_phase;
  return make_coherence(f);
}

/// Decay-rate factor of the fastest element, L + 2 sum_{m<n} cos(x t_mn).
inline double f_of_L(const RegisterGeometry& geometry, double x) {
  const std::size_t L = geometry.size();
  double f = static_cast<double>(L);
  for (std::size_t m = 0; m < L; ++m)
    for (std::size_t n = m + 1; n < L; ++n) f += 2.0 * std::cos(x * geometry.transit(m, n));
  return f;
}

inline double f_of_L_collective(std::size_t qubits) {
  if (qubits == 0) throw ConfigError("register needs at least one qubit");
  return static_cast<double>(qubits * qubits);
}

}  // namespace qrdeco
