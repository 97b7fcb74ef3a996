#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace qrdeco {

/// Pairwise transit times of an L-qubit register, omega_c t_s(m, n).
///
/// A bath mode of frequency x acquires the relative phase x * lag(m, n)
/// between qubits m and n, with lag(m, n) = -lag(n, m). The symmetric
/// magnitude |lag| is the transit time. Only the sign of the lag enters
/// the sine-weighted phase term; damping and the cosine phase see |lag|.
class RegisterGeometry {
 public:
  /// Positions projected on the propagation axis, in units of c / omega_c.
  static RegisterGeometry from_positions(std::span<const double> positions) {
    if (positions.empty()) throw ConfigError("geometry needs at least one qubit");
    RegisterGeometry g(positions.size());
    for (std::size_t m = 0; m < g.size_; ++m) {
      if (!std::isfinite(positions[m])) throw ConfigError("non-finite qubit position");
      for (std::size_t n = 0; n < g.size_; ++n) g.lag_[m * g.size_ + n] = positions[m] - positions[n];
    }
    return g;
  }

  /// Symmetric transit-time matrix (row-major, L x L). Qubits are taken to
  /// be indexed against the propagation direction, so lag(m, n) = +t_s for m < n.
  static RegisterGeometry from_transit_times(std::size_t qubits, std::span<const double> matrix) {
    if (qubits == 0) throw ConfigError("geometry needs at least one qubit");
    if (matrix.size() != qubits * qubits)
      throw ConfigError("transit matrix must have " + std::to_string(qubits * qubits) + " entries");
    RegisterGeometry g(qubits);
    for (std::size_t m = 0; m < qubits; ++m) {
      if (matrix[m * qubits + m] != 0.0) throw ConfigError("transit matrix diagonal must be zero");
      for (std::size_t n = m + 1; n < qubits; ++n) {
        const double a = matrix[m * qubits + n];
        const double b = matrix[n * qubits + m];
        if (!(a >= 0.0) || !std::isfinite(a)) throw ConfigError("transit times must be >= 0");
        if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a)))
          throw ConfigError("transit matrix must be symmetric");
        g.lag_[m * qubits + n] = a;
        g.lag_[n * qubits + m] = -a;
      }
    }
    return g;
  }

  /// Two qubits separated by transit time `ts`.
  static RegisterGeometry pair(double ts) {
    const double m[] = {0.0, ts, ts, 0.0};
    return from_transit_times(2, m);
  }

  /// All qubits co-located; the independent functionals reduce to the collective ones.
  static RegisterGeometry colocated(std::size_t qubits) {
    if (qubits == 0) throw ConfigError("geometry needs at least one qubit");
    return RegisterGeometry(qubits);
  }

  std::size_t size() const noexcept { return size_; }
  double lag(std::size_t m, std::size_t n) const { return lag_.at(m * size_ + n); }
  double transit(std::size_t m, std::size_t n) const { return std::abs(lag(m, n)); }

  double max_transit() const {
    double out = 0.0;
    for (double v : lag_) out = std::max(out, std::abs(v));
    return out;
  }

 private:
  explicit RegisterGeometry(std::size_t n) : size_(n), lag_(n * n, 0.0) {}

  std::size_t size_;
  std::vector<double> lag_;
};

}  // namespace qrdeco
