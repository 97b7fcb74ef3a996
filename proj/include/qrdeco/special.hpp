#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "errors.hpp"

namespace qrdeco {

using Complex = std::complex<double>;

namespace detail {

// Bernoulli numbers B_2 .. B_24.
inline constexpr std::array<double, 12> kBernoulliEven = {
    1.0 / 6.0,          -1.0 / 30.0,   1.0 / 42.0,        -1.0 / 30.0,
    5.0 / 66.0,         -691.0 / 2730.0, 7.0 / 6.0,       -3617.0 / 510.0,
    43867.0 / 798.0,    -174611.0 / 330.0, 854513.0 / 138.0, -236364091.0 / 2730.0};

// Euler-Maclaurin is applied once |n + q| reaches this radius.
inline constexpr double kZetaTailRadius = 20.0;

}  // namespace detail

/// Hurwitz zeta at s = 2: sum_{n>=0} (n + q)^{-2}, for Re(q) > 0.
///
/// Direct summation until |n + q| >= 20, then an Euler-Maclaurin tail with
/// twelve Bernoulli corrections. For s = 2 the k-th correction is
/// B_{2k} w^{-(2k+1)}, which keeps the tail free of factorials.
inline Complex hurwitz_zeta2(Complex q) {
  if (!std::isfinite(q.real()) || !std::isfinite(q.imag()))
    throw DomainError("hurwitz_zeta2: non-finite argument");
  if (!(q.real() > 0.0)) throw DomainError("hurwitz_zeta2: requires Re(q) > 0");

  Complex head{0.0, 0.0};
  Complex w = q;
  while (std::abs(w) < detail::kZetaTailRadius) {
    head += 1.0 / (w * w);
    w += 1.0;
  }

  const Complex inv = 1.0 / w;
  const Complex inv2 = inv * inv;
  Complex tail = inv + 0.5 * inv2;
  Complex power = inv2 * inv;  // w^{-3}
  for (double b : detail::kBernoulliEven) {
    tail += b * power;
    power *= inv2;
  }

  Complex result = head + tail;
  if (std::abs(result) < 1e-300) return {0.0, 0.0};
  return result;
}

inline Complex hurwitz_zeta2(double q) { return hurwitz_zeta2(Complex{q, 0.0}); }

}  // namespace qrdeco
