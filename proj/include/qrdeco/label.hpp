#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace qrdeco {

/// Selects the register element <i_1 ... i_L| rho |j_1 ... j_L>.
///
/// Bits follow the usual qubit convention: 1 is J_z = +1/2, 0 is J_z = -1/2.
/// The text form is "I,J" with one character per qubit, e.g. "11,00" for the
/// superdecoherent element of a two-qubit register.
class CoherenceLabel {
 public:
  CoherenceLabel(std::vector<std::uint8_t> i_bits, std::vector<std::uint8_t> j_bits)
      : i_(std::move(i_bits)), j_(std::move(j_bits)) {
    if (i_.empty()) throw ConfigError("label must cover at least one qubit");
    if (i_.size() != j_.size()) throw ConfigError("label bra and ket lengths differ");
    for (std::size_t n = 0; n < i_.size(); ++n)
      if (i_[n] > 1 || j_[n] > 1) throw ConfigError("label bits must be 0 or 1");
  }

  static CoherenceLabel parse(std::string_view text) {
    auto strip = [](std::string_view s) {
      while (!s.empty() && (s.front() == ' ' || s.front() == '(')) s.remove_prefix(1);
      while (!s.empty() && (s.back() == ' ' || s.back() == ')' || s.back() == '\r'))
        s.remove_suffix(1);
      return s;
    };
    text = strip(text);
    const auto comma = text.find(',');
    if (comma == std::string_view::npos)
      throw ConfigError("label '" + std::string(text) + "' must have the form I,J");
    auto bits = [&](std::string_view s) {
      s = strip(s);
      std::vector<std::uint8_t> out;
      for (char ch : s) {
        if (ch == '0' || ch == '1')
          out.push_back(static_cast<std::uint8_t>(ch - '0'));
        else
          throw ConfigError("label '" + std::string(text) + "' contains a non-binary digit");
      }
      return out;
    };
    return CoherenceLabel(bits(text.substr(0, comma)), bits(text.substr(comma + 1)));
  }

  /// Label from per-qubit (i_n, j_n) bit pairs.
  static CoherenceLabel from_pairs(std::span<const std::pair<int, int>> pairs) {
    std::vector<std::uint8_t> i, j;
    for (auto [a, b] : pairs) {
      if (a < 0 || a > 1 || b < 0 || b > 1) throw ConfigError("label bits must be 0 or 1");
      i.push_back(static_cast<std::uint8_t>(a));
      j.push_back(static_cast<std::uint8_t>(b));
    }
    return CoherenceLabel(std::move(i), std::move(j));
  }

  /// <1...1| rho |0...0>, the fastest decaying element.
  static CoherenceLabel all_ones_zeros(std::size_t qubits) {
    return CoherenceLabel(std::vector<std::uint8_t>(qubits, 1), std::vector<std::uint8_t>(qubits, 0));
  }

  std::size_t size() const noexcept { return i_.size(); }

  /// J_z eigenvalues (+-1/2).
  double i(std::size_t n) const { return i_.at(n) ? 0.5 : -0.5; }
  double j(std::size_t n) const { return j_.at(n) ? 0.5 : -0.5; }

  /// The conjugate element <J| rho |I>.
  CoherenceLabel swapped() const { return CoherenceLabel(j_, i_); }

  bool is_diagonal() const noexcept { return i_ == j_; }

  std::string to_string() const {
    std::string s;
    for (auto b : i_) s.push_back(static_cast<char>('0' + b));
    s.push_back(',');
    for (auto b : j_) s.push_back(static_cast<char>('0' + b));
    return s;
  }

  friend bool operator==(const CoherenceLabel&, const CoherenceLabel&) = default;

 private:
  std::vector<std::uint8_t> i_;
  std::vector<std::uint8_t> j_;
};

}  // namespace qrdeco
