#pragma once

#include <array>

namespace qrdeco::reference {

/// A reference table cell: a crossing time, or a saturation sentinel that may carry a residual.
struct Cell {
  bool saturates = false;
  double value = 0.0;  // crossing time, or residual when saturates && has_residual
  bool has_residual = false;

  static constexpr Cell time(double t) { return {false, t, false}; }
  static constexpr Cell sat() { return {true, 0.0, false}; }
  static constexpr Cell sat(double residual) { return {true, residual, true}; }
};

/// Single qubit: tau_dec and t_f (or saturation residual).
struct SingleRow {
  int d;
  double c;
  double theta;
  Cell tau_dec;
  Cell t_f;
};

/// Two qubits, independent coupling, both labels differ. Column order:
/// minus branch then plus branch.
struct PairD1Row {
  double c;
  double theta;
  double ts;
  Cell tau_dec_minus;
  Cell t_f_minus;
  Cell tau_dec_plus;
  Cell t_f_plus;
};

/// Super-Ohmic pair rows: plus columns then minus columns, each with the
/// coherence left at t_f (0.01 when t_f is finite).
struct PairD3Row {
  double c;
  double theta;
  double ts;
  Cell tau_dec_plus;
  Cell t_f_plus;
  double residual_plus;
  Cell tau_dec_minus;
  Cell t_f_minus;
  double residual_minus;
};

using C = Cell;

// Table 1: Ohmic pair, c1 / theta / omega_c t_s. Reference values.
inline constexpr std::array<PairD1Row, 12> kTable1 = {{
    // row 1
    {0.25, 1e-3, 0.5, C::time(0.436919), C::sat(), C::time(0.235446), C::time(103.507)},
    // row 2
    {0.25, 1.0, 0.5, C::time(0.183755), C::sat(), C::time(0.104119), C::time(2.05958)},
    // row 3
    {0.25, 1e-3, 1e4, C::time(0.290113), C::time(1279.63), C::time(0.290113), C::time(1279.64)},
    // row 4
    {0.25, 1.0, 1e4, C::time(0.127778), C::time(3.45901), C::time(0.127778), C::time(3.45901)},
    // row 5
    {0.1, 1e-3, 0.5, C::time(0.913573), C::sat(), C::time(0.37654), C::time(2025.75)},
    // row 6
    {0.1, 1.0, 0.5, C::time(0.303135), C::sat(), C::time(0.16504), C::time(4.28334)},
    // row 7
    {0.1, 1e-3, 1e4, C::time(0.47316), C::time(5669.66), C::time(0.473159), C::time(5670.15)},
    // row 8
    {0.1, 1.0, 1e4, C::time(0.203549), C::time(7.86596), C::time(0.203549), C::time(7.86596)},
    // row 9
    {0.01, 1e-3, 0.5, C::sat(), C::sat(), C::time(1.45274), C::time(35004.7)},
    // row 10
    {0.01, 1.0, 0.5, C::sat(), C::sat(), C::time(0.538502), C::time(37.2732)},
    // row 11
    {0.01, 1e-3, 1e4, C::time(2.55738), C::sat(), C::time(2.55738), C::time(40816.8)},
    // row 12
    {0.01, 1.0, 1e4, C::time(0.709492), C::time(73.8325), C::time(0.709492), C::time(73.8325)},
}};

// Table 2: super-Ohmic pair, c3 / theta / omega_c t_s. Given to 2-5 digits.
inline constexpr std::array<PairD3Row, 8> kTable2 = {{
    // row 1
    {0.25, 1e-3, 0.5, C::time(0.1292), C::sat(0.477), 0.477, C::time(0.10818), C::sat(0.771), 0.771},
    // row 2
    {0.25, 1e2, 0.5, C::time(0.01338), C::time(0.20), 0.01, C::time(0.01522), C::time(0.24), 0.01},
    // row 3
    {0.25, 1e-3, 1e2, C::time(0.11738), C::sat(0.6065), 0.6065, C::time(0.11738), C::sat(0.6065), 0.6065},
    // row 4
    {0.25, 1e2, 1e2, C::time(0.01421), C::time(0.22), 0.01, C::time(0.01421), C::time(0.22), 0.01},
    // row 5
    {0.01, 1e-3, 0.5, C::time(0.79957), C::sat(0.971), 0.971, C::sat(), C::sat(0.989), 0.989},
    // row 6
    {0.01, 1e2, 0.5, C::time(0.066994), C::time(1.51), 0.01, C::time(0.07645), C::sat(0.449), 0.449},
    // row 7
    {0.01, 1e-3, 1e2, C::time(9.7767), C::sat(0.9802), 0.9802, C::time(9.7767), C::sat(0.9802), 0.9802},
    // row 8
    {0.01, 1e2, 1e2, C::time(0.07124), C::sat(0.01831), 0.01831, C::time(0.07124), C::sat(0.01832), 0.01832},
}};

// Table 3: single qubit, d / c_d / theta.
inline constexpr std::array<SingleRow, 13> kTable3 = {{
    // rows 1-6, Ohmic
    {1, 0.25, 1e-5, C::time(0.418831), C::time(273950.34)},
    {1, 0.25, 1.0, C::time(0.181611), C::time(6.39891)},
    {1, 0.1, 1e-5, C::time(0.705612), C::time(1153307.91)},
    {1, 0.1, 1.0, C::time(0.291365), C::time(15.19703)},
    {1, 0.01, 1e-5, C::time(7.47367), C::time(14346140.39)},
    {1, 0.01, 1.0, C::time(1.09604), C::time(147.12606)},
    // rows 7-13, super-Ohmic
    {3, 0.25, 1e-5, C::time(0.167969), C::sat(0.778801)},
    {3, 0.25, 1.0, C::time(0.154762), C::sat(0.564132)},
    {3, 0.25, 1e2, C::time(0.020104), C::time(0.318417)},
    {3, 0.1, 1e-5, C::time(0.275766), C::sat(0.904837)},
    {3, 0.1, 1.0, C::time(0.251550), C::sat(0.795339)},
    {3, 0.1, 1e2, C::time(0.031791), C::time(0.546769)},
    {3, 0.01, 1e2, C::time(0.101012), C::sat(0.135331)},
}};

}  // namespace qrdeco::reference
