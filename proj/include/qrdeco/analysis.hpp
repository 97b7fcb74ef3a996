#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bath.hpp"
#include "closedform.hpp"
#include "errors.hpp"
#include "kernels.hpp"
#include "reference_tables.hpp"

namespace qrdeco {

inline constexpr double kDecoherenceLevel = 0.98;
inline constexpr double kFinalLevel = 0.01;
inline constexpr double kDefaultHorizon = 1e7;
inline constexpr double kMaxHorizon = 1e13;

using Evaluator = std::function<CoherenceValue(double)>;

/// A coherence factor as a function of time plus what is known about it:
/// times where fine structure is expected (echoes near the transit times),
/// and the tau -> infinity exponent (+inf if unbounded, NaN if unknown).
struct DecayCurve {
  Evaluator eval;
  std::vector<double> features;
  double limit_gamma = std::numeric_limits<double>::quiet_NaN();

  double gamma(double tau) const { return eval(tau).gamma; }
  bool limit_known() const { return !std::isnan(limit_gamma); }
};

enum class TraceSource { ClosedForm, Quadrature, Discrete };

inline const char* to_string(TraceSource s) {
  switch (s) {
    case TraceSource::ClosedForm: return "closed-form";
    case TraceSource::Quadrature: return "quadrature";
    case TraceSource::Discrete: return "discrete";
  }
  return "?";
}

struct CoherenceTrace {
  std::vector<double> taus;
  std::vector<CoherenceValue> values;
  TraceSource source = TraceSource::ClosedForm;
  // Optional per-point functionals; empty when the source only gives gamma and phase.
  std::vector<DecoherenceFunctions> functions;
};

/// Result of a threshold search: a crossing time, or saturation at `residual`.
struct Threshold {
  std::optional<double> time;
  double residual = std::numeric_limits<double>::quiet_NaN();

  bool saturates() const { return !time.has_value(); }
};

struct DecoherenceTimes {
  Threshold tau_dec;
  Threshold t_f;
  bool recoherence = false;
};

struct Crossing {
  double time;
  bool downward;  // magnitude falls through the level
};

namespace detail {

inline void append_log_grid(std::vector<double>& out, double lo, double hi, int per_decade) {
  const double span = std::log10(hi / lo);
  const int n = std::max(1, static_cast<int>(std::ceil(span * per_decade)));
  for (int k = 0; k <= n; ++k) out.push_back(lo * std::pow(10.0, span * k / n));
}

// Forward scan grid on (lo, hi]: log spacing plus dense linear windows around features.
inline std::vector<double> scan_grid(double lo, double hi, const std::vector<double>& features) {
  std::vector<double> g;
  append_log_grid(g, std::max(lo, 1e-6), hi, 60);
  for (double f : features) {
    if (!(f > 0.0)) continue;
    const double w = std::max(5.0, 0.25 * f);
    const double a = std::max(0.0, f - w), b = f + w;
    constexpr int kWindow = 800;
    for (int k = 0; k <= kWindow; ++k) g.push_back(a + (b - a) * k / kWindow);
  }
  std::erase_if(g, [&](double x) { return !(x > lo) || x > hi; });
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

// Bisection on gamma(t) - target between a (below) and b (at or above).
template <class G>
double bisect(const G& gamma, double a, double b, double target, bool rising) {
  for (int it = 0; it < 200 && b - a > 1e-12 * b; ++it) {
    const double m = 0.5 * (a + b);
    const bool above = gamma(m) >= target;
    (above == rising ? b : a) = m;
  }
  return 0.5 * (a + b);
}

}  // namespace detail

/// Every crossing of |coherence| = level on (0, horizon], in time order.
inline std::vector<Crossing> all_crossings(const DecayCurve& curve, double level, double horizon = kDefaultHorizon) {
  const double target = -std::log(level);
  auto g = [&](double t) { return curve.gamma(t); };
  std::vector<Crossing> out;
  double prev_t = 0.0;
  bool prev_above = g(0.0) >= target;
  for (double t : detail::scan_grid(0.0, horizon, curve.features)) {
    const bool above = g(t) >= target;
    if (above != prev_above) {
      const double root = detail::bisect(g, prev_t, t, target, above);
      out.push_back({root, above});
    }
    prev_t = t;
    prev_above = above;
  }
  return out;
}

/// First time |coherence| falls to `level`.
///
/// If no crossing is found up to the horizon and the curve's limit says one
/// must exist, the horizon is extended by decades up to kMaxHorizon. Without a
/// crossing the result saturates at the analytic limit, or at the value
/// reached at the horizon when no limit is known.
inline Threshold find_threshold(const DecayCurve& curve, double level, double horizon = kDefaultHorizon) {
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("threshold level must lie in (0, 1)");
  const double target = -std::log(level);
  auto g = [&](double t) { return curve.gamma(t); };
  if (g(0.0) >= target) return {0.0, {}};

  double lo = 0.0;
  double hi = horizon;
  double prev_t = 0.0;
  while (true) {
    for (double t : detail::scan_grid(lo, hi, lo == 0.0 ? curve.features : std::vector<double>{})) {
      if (g(t) >= target) return {detail::bisect(g, prev_t, t, target, true), {}};
      prev_t = t;
    }
    const bool must_cross = curve.limit_known() && curve.limit_gamma > target;
    if (!must_cross || hi >= kMaxHorizon) break;
    lo = hi;
    hi *= 10.0;
  }
  Threshold out;
  if (curve.limit_known()) {
    if (curve.limit_gamma > target)
      throw NumericalFailure("no crossing found before the maximum horizon", hi);
    out.residual = std::exp(-curve.limit_gamma);
  } else {
    out.residual = curve.eval(hi).magnitude();
  }
  return out;
}

inline Threshold find_tau_dec(const DecayCurve& curve, double horizon = kDefaultHorizon) {
  return find_threshold(curve, kDecoherenceLevel, horizon);
}

inline Threshold find_t_f(const DecayCurve& curve, double horizon = kDefaultHorizon) {
  return find_threshold(curve, kFinalLevel, horizon);
}

/// Non-monotonic decay: a later rise above a previous minimum by more than
/// 1e-6 absolute and 0.1% of the drop that preceded it.
inline bool detect_recoherence(const std::vector<double>& magnitudes) {
  if (magnitudes.empty()) return false;
  double peak = magnitudes.front();
  double trough = peak;
  for (double v : magnitudes) {
    if (v < trough) trough = v;
    const double rise = v - trough;
    const double drop = peak - trough;
    if (rise > 1e-6 && rise > 1e-3 * drop) return true;
    if (v > peak) {
      peak = v;
      trough = v;
    }
  }
  return false;
}

inline bool detect_recoherence(const CoherenceTrace& trace) {
  std::vector<double> m;
  m.reserve(trace.values.size());
  for (const auto& v : trace.values) m.push_back(v.magnitude());
  return detect_recoherence(m);
}

inline CoherenceTrace sample_trace(const DecayCurve& curve, const std::vector<double>& taus,
                                   TraceSource source = TraceSource::ClosedForm) {
  for (std::size_t k = 1; k < taus.size(); ++k)
    if (!(taus[k] > taus[k - 1])) throw ConfigError("trace grid must be strictly increasing");
  CoherenceTrace t;
  t.source = source;
  t.taus = taus;
  t.values.reserve(taus.size());
  for (double x : taus) t.values.push_back(curve.eval(x));
  return t;
}

/// Grid used for recoherence checks: 3000 log-spaced points on [1e-4, 1e4] plus feature windows.
inline std::vector<double> recoherence_grid(const std::vector<double>& features = {}) {
  std::vector<double> g;
  detail::append_log_grid(g, 1e-4, 1e4, 375);
  for (double f : features) {
    if (!(f > 0.0)) continue;
    const double w = std::max(5.0, 0.25 * f);
    for (int k = 0; k <= 800; ++k) g.push_back(std::max(0.0, f - w) + 2.0 * w * k / 800);
  }
  std::erase_if(g, [](double x) { return !(x > 0.0); });
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

inline DecoherenceTimes decoherence_times(const DecayCurve& curve, double horizon = kDefaultHorizon) {
  DecoherenceTimes out;
  out.tau_dec = find_tau_dec(curve, horizon);
  out.t_f = find_t_f(curve, horizon);
  out.recoherence = detect_recoherence(sample_trace(curve, recoherence_grid(curve.features)));
  return out;
}

// ---------------------------------------------------------------------------
// Closed-form curves

inline DecayCurve single_curve(const BathSpec& bath) {
  closed::require_closed_form(bath);
  return {[bath](double t) { return CoherenceValue{closed::gamma_single(bath, t), 0.0}; }, {},
          closed::single_limit(bath)};
}

inline DecayCurve pair_independent_curve(const BathSpec& bath, double ts, PairCase pc, Branch br) {
  closed::require_closed_form(bath);
  return {[=](double t) { return closed::pair_independent(bath, t, ts, pc, br); }, {ts},
          closed::pair_independent_limit(bath, ts, pc, br)};
}

inline DecayCurve pair_collective_curve(const BathSpec& bath, PairCase pc, Branch br) {
  closed::require_closed_form(bath);
  return {[=](double t) { return closed::pair_collective(bath, t, pc, br); }, {},
          closed::pair_collective_limit(bath, pc, br)};
}

// ---------------------------------------------------------------------------
// Tables

using TableValue = reference::Cell;

struct TableCell {
  std::string column;
  TableValue computed;
  TableValue expected;
  double rel_dev = std::numeric_limits<double>::quiet_NaN();
  bool match = false;
};

struct TableRow {
  int d = 0;
  double c = 0.0;
  double theta = 0.0;
  std::optional<double> ts;
  std::vector<TableCell> cells;
  std::string note;
};

struct Table {
  int id = 0;
  double tolerance = 0.0;
  std::vector<TableRow> rows;

  bool all_match() const {
    return std::all_of(rows.begin(), rows.end(), [](const TableRow& r) {
      return std::all_of(r.cells.begin(), r.cells.end(), [](const TableCell& c) { return c.match; });
    });
  }
};

inline TableValue to_table_value(const Threshold& t) {
  return t.time ? TableValue::time(*t.time) : TableValue::sat(t.residual);
}

/// Compares a computed value against a reference one. Saturation cells match on
/// the sentinel, and on the residual when one is given.
inline TableCell compare_cell(std::string column, const TableValue& computed, const TableValue& expected,
                              double tol) {
  TableCell c{std::move(column), computed, expected};
  if (computed.saturates != expected.saturates) return c;
  if (expected.saturates && !expected.has_residual) {
    c.match = true;
    return c;
  }
  c.rel_dev = std::abs(computed.value - expected.value) / std::abs(expected.value);
  c.match = c.rel_dev <= tol;
  return c;
}

inline constexpr double kTable1Tolerance = 1e-3;
inline constexpr double kTable2Tolerance = 5e-3;
inline constexpr double kTable3Tolerance = 1e-3;

namespace detail {

// Reports how close the minus-branch exponent is to its analytic limit at a large time.
inline std::string minus_limit_note(const BathSpec& bath, double ts) {
  const auto curve = pair_independent_curve(bath, ts, PairCase::BothDiffer, Branch::Minus);
  const double probe = 1e6;
  const double diff = curve.gamma(probe) - curve.limit_gamma;
  char buf[128];
  std::snprintf(buf, sizeof buf, "minus limit 2*Gamma(ts)=%.9g, Gamma-(1e6)-limit=%.3g", curve.limit_gamma, diff);
  return buf;
}

}  // namespace detail

inline Table make_table1(double tol = kTable1Tolerance) {
  Table t{1, tol, {}};
  for (const auto& ref : reference::kTable1) {
    const BathSpec bath(1, ref.c, ref.theta);
    TableRow row{1, ref.c, ref.theta, ref.ts, {}, {}};
    const auto minus = pair_independent_curve(bath, ref.ts, PairCase::BothDiffer, Branch::Minus);
    const auto plus = pair_independent_curve(bath, ref.ts, PairCase::BothDiffer, Branch::Plus);
    row.cells.push_back(compare_cell("tau_dec-", to_table_value(find_tau_dec(minus)), ref.tau_dec_minus, tol));
    row.cells.push_back(compare_cell("t_f-", to_table_value(find_t_f(minus)), ref.t_f_minus, tol));
    row.cells.push_back(compare_cell("tau_dec+", to_table_value(find_tau_dec(plus)), ref.tau_dec_plus, tol));
    row.cells.push_back(compare_cell("t_f+", to_table_value(find_t_f(plus)), ref.t_f_plus, tol));
    row.note = detail::minus_limit_note(bath, ref.ts);
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline Table make_table2(double tol = kTable2Tolerance) {
  Table t{2, tol, {}};
  for (const auto& ref : reference::kTable2) {
    const BathSpec bath(3, ref.c, ref.theta);
    TableRow row{3, ref.c, ref.theta, ref.ts, {}, {}};
    auto add_branch = [&](Branch br, const char* sfx, const TableValue& e_dec, const TableValue& e_tf,
                          double e_res) {
      const auto curve = pair_independent_curve(bath, ref.ts, PairCase::BothDiffer, br);
      const Threshold tf = find_t_f(curve);
      row.cells.push_back(
          compare_cell(std::string("tau_dec") + sfx, to_table_value(find_tau_dec(curve)), e_dec, tol));
      row.cells.push_back(compare_cell(std::string("t_f") + sfx, to_table_value(tf), e_tf, tol));
      const double res = tf.time ? kFinalLevel : tf.residual;
      row.cells.push_back(
          compare_cell(std::string("residual") + sfx, TableValue::time(res), TableValue::time(e_res), tol));
      // Non-first crossings of either level, for cells where the curve dips and recovers.
      for (double level : {kDecoherenceLevel, kFinalLevel}) {
        const auto xs = all_crossings(curve, level);
        if (xs.size() > 1) {
          row.note += std::string(row.note.empty() ? "" : "; ") + sfx + " crosses " + std::to_string(level) + " at";
          for (const auto& x : xs) row.note += " " + std::to_string(x.time) + (x.downward ? "v" : "^");
        }
      }
    };
    add_branch(Branch::Plus, "+", ref.tau_dec_plus, ref.t_f_plus, ref.residual_plus);
    add_branch(Branch::Minus, "-", ref.tau_dec_minus, ref.t_f_minus, ref.residual_minus);
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline Table make_table3(double tol = kTable3Tolerance) {
  Table t{3, tol, {}};
  for (const auto& ref : reference::kTable3) {
    const BathSpec bath(ref.d, ref.c, ref.theta);
    TableRow row{ref.d, ref.c, ref.theta, std::nullopt, {}, {}};
    const auto curve = single_curve(bath);
    row.cells.push_back(compare_cell("tau_dec", to_table_value(find_tau_dec(curve)), ref.tau_dec, tol));
    row.cells.push_back(compare_cell("t_f", to_table_value(find_t_f(curve)), ref.t_f, tol));
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline Table make_table(int id) {
  switch (id) {
    case 1: return make_table1();
    case 2: return make_table2();
    case 3: return make_table3();
  }
  throw ConfigError("unknown table " + std::to_string(id) + " (expected 1, 2 or 3)");
}

// ---------------------------------------------------------------------------
// Figures

/// One family of magnitude curves: values[k][i] at x = xs[i], parameter params[k].
struct FigurePanel {
  std::string name;
  std::string series;      // branch or component
  std::string param_name;  // "ts", "theta"
  std::string x_name;      // "tau" or "tau_T" (time in thermal units)
  std::vector<double> params;
  std::vector<double> xs;
  std::vector<std::vector<double>> values;
};

struct Figure {
  int id = 0;
  std::vector<FigurePanel> panels;
};

namespace detail {

inline std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k) g[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  return g;
}

inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  const double a = std::log10(lo), b = std::log10(hi);
  for (std::size_t k = 0; k < n; ++k) g[k] = std::pow(10.0, a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1));
  return g;
}

// Single-qubit exponent for figures. Ohmic baths above theta = 1 leave the
// low-temperature formula and go through quadrature.
inline std::function<double(double)> figure_gamma(const BathSpec& bath,
                                                  Fluctuations part = Fluctuations::Total) {
  const bool quad = bath.d() == 1 && bath.theta() > 1.0;
  if (quad) return [bath, part](double t) { return gamma_single(bath, t, {}, part); };
  return [bath, part](double t) {
    const double total = closed::gamma_single(bath, t);
    if (part == Fluctuations::Total) return total;
    const double vac = bath.d() == 1 ? closed::gamma1_vacuum(bath.c(), t) : closed::gamma3_vacuum(bath.c(), t);
    return part == Fluctuations::Vacuum ? vac : total - vac;
  };
}

// Pair surface over (tau, ts): tau = i h, ts = j k h, with the single-qubit
// exponent memoized on integer multiples of h.
inline FigurePanel pair_surface(const std::string& name, const BathSpec& bath, Branch br, double tau_max,
                                double ts_max) {
  constexpr std::size_t kTau = 101, kTs = 51;
  const double h = tau_max / static_cast<double>(kTau - 1);
  const long k = std::max(1L, std::lround(ts_max / static_cast<double>(kTs - 1) / h));
  const auto gamma = figure_gamma(bath);
  std::map<long, double> memo;
  auto G = [&](long n) {
    n = std::labs(n);
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    const double v = gamma(static_cast<double>(n) * h);
    memo.emplace(n, v);
    return v;
  };
  FigurePanel p{name, br == Branch::Plus ? "plus" : "minus", "ts", "tau", {}, {}, {}};
  const double sign = br == Branch::Plus ? 1.0 : -1.0;
  for (std::size_t i = 0; i < kTau; ++i) p.xs.push_back(static_cast<double>(i) * h);
  for (std::size_t j = 0; j < kTs; ++j) {
    const long s = static_cast<long>(j) * k;
    p.params.push_back(static_cast<double>(s) * h);
    std::vector<double> row;
    for (std::size_t i = 0; i < kTau; ++i) {
      const long t = static_cast<long>(i);
      const double cross = 0.5 * G(s + t) + 0.5 * G(s - t) - G(s);
      row.push_back(std::exp(-(2.0 * G(t) + sign * 2.0 * cross)));
    }
    p.values.push_back(std::move(row));
  }
  return p;
}

inline double tau_max_for(double theta) { return theta < 0.1 ? 10.0 : theta <= 1.0 ? 5.0 : 1.0; }

inline FigurePanel theta_surface(const std::string& name, const std::string& series, int d, double c,
                                 double factor, double theta_lo, double theta_hi) {
  FigurePanel p{name, series, "theta", "tau", log_grid(theta_lo, theta_hi, 36), linear_grid(0.0, 10.0, 101), {}};
  for (double th : p.params) {
    const auto gamma = figure_gamma(BathSpec(d, c, th));
    std::vector<double> row;
    for (double t : p.xs) row.push_back(std::exp(-factor * gamma(t)));
    p.values.push_back(std::move(row));
  }
  return p;
}

}  // namespace detail

inline Figure make_figure(int id) {
  Figure f{id, {}};
  const char* roman[] = {"i", "ii", "iii", "iv"};
  const double thetas[] = {1e-3, 1.0, 1e2};
  switch (id) {
    case 1:
    case 2:
    case 3:
    case 4: {
      const int d = id <= 2 ? 1 : 3;
      const Branch br = id % 2 == 1 ? Branch::Plus : Branch::Minus;
      for (int k = 0; k < 3; ++k)
        f.panels.push_back(detail::pair_surface(roman[k], BathSpec(d, 0.25, thetas[k]), br,
                                                detail::tau_max_for(thetas[k]), 10.0));
      return f;
    }
    case 5: {
      const Branch br[] = {Branch::Plus, Branch::Plus, Branch::Minus, Branch::Minus};
      const double th[] = {1e-3, 1e2, 1e-3, 1e2};
      for (int k = 0; k < 4; ++k)
        f.panels.push_back(detail::pair_surface(roman[k], BathSpec(3, 0.01, th[k]), br[k], 20.0, 20.0));
      return f;
    }
    case 6:
      f.panels.push_back(detail::theta_surface("i", "plus", 1, 0.25, 4.0, 1e-3, 1e2));
      f.panels.push_back(detail::theta_surface("ii", "plus", 3, 0.25, 4.0, 1e-3, 1e2));
      return f;
    case 7: {
      const double part_i[] = {1.0, 1e-2, 1e-5};
      const std::pair<const char*, Fluctuations> parts[] = {
          {"total", Fluctuations::Total}, {"vacuum", Fluctuations::Vacuum}, {"thermal", Fluctuations::Thermal}};
      auto xs_i = detail::log_grid(1e-2, 1e6, 161);
      xs_i.insert(xs_i.begin(), 0.0);
      for (const auto& [series, part] : parts) {
        FigurePanel p{"i", series, "theta", "tau", {}, xs_i, {}};
        for (double th : part_i) {
          const auto gamma = detail::figure_gamma(BathSpec(1, 0.25, th), part);
          std::vector<double> row;
          for (double t : p.xs) row.push_back(std::exp(-gamma(t)));
          p.params.push_back(th);
          p.values.push_back(std::move(row));
        }
        f.panels.push_back(std::move(p));
      }
      auto xs_ii = detail::log_grid(1e-3, 1e3, 121);
      xs_ii.insert(xs_ii.begin(), 0.0);
      FigurePanel p{"ii", "total", "theta", "tau_T", {}, xs_ii, {}};
      for (double th : {1e-5, 1e-2, 1e2}) {
        const auto gamma = detail::figure_gamma(BathSpec(1, 0.25, th));
        std::vector<double> row;
        for (double x : p.xs) {
          const double t = x / th;
          // Past the point where the coherence is gone the exponent is not needed.
          row.push_back(!row.empty() && row.back() < 1e-300 ? 0.0 : std::exp(-gamma(t)));
        }
        p.params.push_back(th);
        p.values.push_back(std::move(row));
      }
      f.panels.push_back(std::move(p));
      return f;
    }
    case 8:
      f.panels.push_back(detail::theta_surface("i", "single", 1, 0.25, 1.0, 1e-5, 1e2));
      f.panels.push_back(detail::theta_surface("ii", "single", 3, 0.25, 1.0, 1e-5, 1e2));
      return f;
  }
  throw ConfigError("unknown figure " + std::to_string(id) + " (expected 1 to 8)");
}

}  // namespace qrdeco
