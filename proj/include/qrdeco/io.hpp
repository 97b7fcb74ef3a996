#pragma once

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "analysis.hpp"
#include "errors.hpp"
#include "register.hpp"

namespace qrdeco::io {

inline constexpr std::string_view kTraceHeader = "tau,gamma,theta_phase,lambda_phase,magnitude,phase";
inline constexpr std::string_view kTableHeader =
    "table,row,d,c,theta,ts,column,computed_kind,computed,expected_kind,expected,rel_dev,match";
inline constexpr std::string_view kFigureHeader = "figure,panel,series,param_name,param,x_name,x,magnitude";

/// Shortest text that reads back to the same double.
inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline double parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw ConfigError("not a number: '" + std::string(s) + "'");
  return v;
}

inline std::vector<std::string> split(std::string_view line, char sep = ',') {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

/// Reads non-empty, non-comment ('#') lines with trailing CR removed.
inline std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    out.push_back(line);
  }
  return out;
}

inline void write_trace_row(std::ostream& out, double tau, const DecoherenceFunctions& f,
                            const CoherenceValue& v) {
  out << fmt(tau) << ',' << fmt(f.gamma) << ',' << fmt(f.theta_phase) << ',' << fmt(f.lambda_phase) << ','
      << fmt(v.magnitude()) << ',' << fmt(v.phase) << '\n';
}

/// Trace CSV. When the trace carries no functionals, gamma and the phase are
/// written with the phase in theta_phase and lambda_phase = 0.
inline void write_trace_csv(std::ostream& out, const CoherenceTrace& trace, bool header = true) {
  if (header) out << kTraceHeader << '\n';
  for (std::size_t k = 0; k < trace.taus.size(); ++k) {
    DecoherenceFunctions f;
    if (k < trace.functions.size()) {
      f = trace.functions[k];
    } else {
      f.gamma = trace.values[k].gamma;
      f.theta_phase = trace.values[k].phase;
      f.aleph = f.theta_phase;
    }
    write_trace_row(out, trace.taus[k], f, trace.values[k]);
  }
}

inline std::string value_kind(const TableValue& v) { return v.saturates ? "saturates" : "value"; }

inline std::string value_text(const TableValue& v) {
  if (v.saturates && !v.has_residual) return "";
  return fmt(v.value);
}

inline void write_table_csv(std::ostream& out, const Table& table) {
  out << kTableHeader << '\n';
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    for (const auto& c : row.cells) {
      out << table.id << ',' << r + 1 << ',' << row.d << ',' << fmt(row.c) << ',' << fmt(row.theta) << ','
          << (row.ts ? fmt(*row.ts) : "") << ',' << c.column << ',' << value_kind(c.computed) << ','
          << value_text(c.computed) << ',' << value_kind(c.expected) << ',' << value_text(c.expected) << ','
          << (std::isnan(c.rel_dev) ? "" : fmt(c.rel_dev)) << ',' << (c.match ? 1 : 0) << '\n';
    }
  }
}

inline void write_figure_csv(std::ostream& out, const Figure& fig) {
  out << kFigureHeader << '\n';
  for (const auto& p : fig.panels)
    for (std::size_t k = 0; k < p.params.size(); ++k)
      for (std::size_t i = 0; i < p.xs.size(); ++i)
        out << fig.id << ',' << p.name << ',' << p.series << ',' << p.param_name << ',' << fmt(p.params[k]) << ','
            << p.x_name << ',' << fmt(p.xs[i]) << ',' << fmt(p.values[k][i]) << '\n';
}

/// Modes file: one mode per line, "x,weight,phase_1,...,phase_L".
inline ModeSet read_modes(std::istream& in) {
  ModeSet ms;
  bool first = true;
  for (const auto& line : read_lines(in)) {
    const auto f = split(line);
    if (f.size() < 3) throw ConfigError("mode line needs x, weight and at least one phase: '" + line + "'");
    if (first) {
      ms.qubits = f.size() - 2;
      first = false;
    }
    Mode m;
    m.x = parse_double(f[0]);
    m.weight = parse_double(f[1]);
    for (std::size_t k = 2; k < f.size(); ++k) m.phases.push_back(parse_double(f[k]));
    ms.add(std::move(m));
  }
  return ms;
}

inline void write_modes(std::ostream& out, const ModeSet& ms) {
  out << "# x,weight,phase_1..phase_" << ms.qubits << '\n';
  for (const auto& m : ms.modes) {
    out << fmt(m.x) << ',' << fmt(m.weight);
    for (double p : m.phases) out << ',' << fmt(p);
    out << '\n';
  }
}

}  // namespace qrdeco::io
