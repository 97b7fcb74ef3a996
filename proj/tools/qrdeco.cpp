// Command-line front end: traces, tables, figures, mode sets and CSV verification.

#include <csignal>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <qrdeco/qrdeco.hpp>

namespace {

using namespace qrdeco;
using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitVerify = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

// JSON config files: top-level keys are option names, nested objects are subcommands.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}\n"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j;
    try {
      input >> j;
    } catch (const json::exception& e) {
      throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    std::vector<CLI::ConfigItem> items;
    flatten(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void flatten(const json& j, const std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& out) {
    if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (value.is_object()) {
        auto p = parents;
        p.push_back(key);
        flatten(value, p, out);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array())
        for (const auto& e : value) item.inputs.push_back(scalar(e));
      else
        item.inputs.push_back(scalar(value));
      out.push_back(std::move(item));
    }
  }
};

// Write-then-rename output; an interrupt removes the temporary file.
char g_tmp_path[4096] = {0};

extern "C" void on_interrupt(int sig) {
  if (g_tmp_path[0] != '\0') ::unlink(g_tmp_path);
  std::signal(sig, SIG_DFL);
  std::raise(sig);
}

void emit(const std::string& path, const std::function<void(std::ostream&)>& writer) {
  if (path.empty() || path == "-") {
    writer(std::cout);
    std::cout.flush();
    return;
  }
  const std::string tmp = path + ".tmp";
  if (tmp.size() >= sizeof g_tmp_path) throw ConfigError("output path too long");
  std::strcpy(g_tmp_path, tmp.c_str());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot open '" + tmp + "' for writing");
    writer(f);
    f.flush();
    if (!f) throw ConfigError("failed writing '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
  g_tmp_path[0] = '\0';
}

struct BathOptions {
  int d = 1;
  double c = 0.25;
  double theta = 1e-3;

  void add(CLI::App* app) {
    app->add_option("--d", d, "bath dimensionality (closed forms: 1 or 3)")->capture_default_str();
    app->add_option("--c", c, "dimensionless coupling c_d")->capture_default_str();
    app->add_option("--theta", theta, "temperature ratio k_B T / (hbar omega_c)")->capture_default_str();
  }
  BathSpec spec() const { return BathSpec(d, c, theta); }
};

struct GridOptions {
  double tmax = 100.0;
  double tmin = 1e-3;
  int points = 201;
  std::string grid = "linear";
  bool times = false;

  void add(CLI::App* app) {
    app->add_option("--tmax", tmax, "last time point (omega_c t)")->capture_default_str();
    app->add_option("--tmin", tmin, "first nonzero point of a log grid")->capture_default_str();
    app->add_option("--points", points, "number of time points")->capture_default_str();
    app->add_option("--grid", grid, "linear or log")->check(CLI::IsMember({"linear", "log"}))->capture_default_str();
    app->add_flag("--times", times, "write a JSON summary of tau_dec, t_f and recoherence instead of a trace");
  }

  std::vector<double> taus() const {
    if (!(tmax >= 0.0) || !std::isfinite(tmax)) throw ConfigError("--tmax must be >= 0");
    if (points < 1) throw ConfigError("--points must be >= 1");
    if (tmax == 0.0 || points == 1) return {0.0};
    std::vector<double> g{0.0};
    if (grid == "log") {
      if (!(tmin > 0.0 && tmin < tmax)) throw ConfigError("--tmin must lie in (0, tmax)");
      const double a = std::log10(tmin), b = std::log10(tmax);
      for (int k = 0; k + 1 < points; ++k) g.push_back(std::pow(10.0, a + (b - a) * k / std::max(1, points - 2)));
    } else {
      for (int k = 1; k < points; ++k) g.push_back(tmax * k / (points - 1));
    }
    return g;
  }
};

Method parse_method(const std::string& m) {
  if (m == "closed" || m == "literal") return Method::Closed;
  if (m == "quadrature") return Method::Quadrature;
  return Method::Oracle;
}

json threshold_json(const Threshold& t) {
  json j;
  j["saturates"] = t.saturates();
  j["time"] = t.time ? json(*t.time) : json(nullptr);
  j["residual"] = t.saturates() && std::isfinite(t.residual) ? json(t.residual) : json(nullptr);
  return j;
}

void write_times(std::ostream& out, const DecoherenceTimes& t, const json& context) {
  json j = context;
  j["tau_dec"] = threshold_json(t.tau_dec);
  j["t_f"] = threshold_json(t.t_f);
  j["recoherence"] = t.recoherence;
  out << j.dump(2) << '\n';
}

// Evaluates f on the grid and writes a trace.
void write_functions_trace(const std::string& path, const std::vector<double>& taus,
                           const std::function<RegisterCoherence(double)>& f) {
  CoherenceTrace trace;
  for (double t : taus) {
    const auto r = f(t);
    trace.taus.push_back(t);
    trace.values.push_back(r.value);
    trace.functions.push_back(r.functions);
  }
  emit(path, [&](std::ostream& o) { io::write_trace_csv(o, trace); });
}

DecayCurve curve_from(const std::function<RegisterCoherence(double)>& f, std::vector<double> features = {},
                      double limit = std::numeric_limits<double>::quiet_NaN()) {
  return {[f](double t) { return f(t).value; }, std::move(features), limit};
}

RegisterGeometry load_geometry(const std::string& path, const std::vector<double>& positions, std::size_t L) {
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read geometry file '" + path + "'");
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ConfigError(std::string("geometry file is not valid JSON: ") + e.what());
    }
    if (j.contains("positions")) return RegisterGeometry::from_positions(j.at("positions").get<std::vector<double>>());
    if (j.contains("transit")) {
      const auto rows = j.at("transit").get<std::vector<std::vector<double>>>();
      std::vector<double> flat;
      for (const auto& r : rows) {
        if (r.size() != rows.size()) throw ConfigError("transit matrix must be square");
        flat.insert(flat.end(), r.begin(), r.end());
      }
      return RegisterGeometry::from_transit_times(rows.size(), flat);
    }
    throw ConfigError("geometry file needs a 'positions' or 'transit' entry");
  }
  if (!positions.empty()) return RegisterGeometry::from_positions(positions);
  return RegisterGeometry::colocated(L);
}

ModeSet load_modes(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read modes file '" + path + "'");
  return io::read_modes(in);
}

// ---------------------------------------------------------------------------
// verify

struct VerifyReport {
  std::size_t rows = 0;
  std::vector<std::string> problems;
  void fail(std::size_t line, const std::string& what) {
    if (problems.size() < 20) problems.push_back("line " + std::to_string(line) + ": " + what);
  }
};

bool close_rel(double a, double b, double tol) {
  if (std::isnan(a) || std::isnan(b)) return false;
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

VerifyReport verify_csv(std::istream& in) {
  VerifyReport rep;
  std::string header;
  if (!std::getline(in, header)) throw ConfigError("empty file");
  if (!header.empty() && header.back() == '\r') header.pop_back();
  const bool labelled = header.rfind("label,", 0) == 0;
  const std::string body = labelled ? header.substr(6) : header;
  std::string line;
  std::size_t n = 1;
  if (body == io::kTraceHeader) {
    std::map<std::string, double> last_tau;
    while (std::getline(in, line)) {
      ++n;
      if (line.empty()) continue;
      auto f = io::split(line);
      std::string label;
      if (labelled) {
        if (f.size() < 3) {
          rep.fail(n, "missing label fields");
          continue;
        }
        // Labels are written as I,J so they span two fields.
        label = f[0] + "," + f[1];
        f.erase(f.begin(), f.begin() + 2);
      }
      if (f.size() != 6) {
        rep.fail(n, "expected 6 numeric fields");
        continue;
      }
      ++rep.rows;
      const double tau = io::parse_double(f[0]), gamma = io::parse_double(f[1]), th = io::parse_double(f[2]),
                   la = io::parse_double(f[3]), mag = io::parse_double(f[4]), ph = io::parse_double(f[5]);
      auto it = last_tau.find(label);
      if (it != last_tau.end() && !(tau > it->second)) rep.fail(n, "time grid not strictly increasing");
      last_tau[label] = tau;
      if (!(gamma >= 0.0)) rep.fail(n, "negative damping exponent");
      if (!(mag >= 0.0 && mag <= 1.0)) rep.fail(n, "magnitude outside [0, 1]");
      if (!close_rel(mag, std::exp(-gamma), 1e-12)) rep.fail(n, "magnitude != exp(-gamma)");
      if (!close_rel(ph, th - la, 1e-12)) rep.fail(n, "phase != theta_phase - lambda_phase");
      if (tau == 0.0 && (gamma != 0.0 || ph != 0.0)) rep.fail(n, "coherence factor at tau = 0 is not 1");
    }
  } else if (header == io::kTableHeader) {
    while (std::getline(in, line)) {
      ++n;
      if (line.empty()) continue;
      const auto f = io::split(line);
      if (f.size() != 13) {
        rep.fail(n, "expected 13 fields");
        continue;
      }
      ++rep.rows;
      const bool cs = f[7] == "saturates", es = f[9] == "saturates";
      const bool match = f[12] == "1";
      if (cs != es) {
        if (match) rep.fail(n, "sentinel mismatch flagged as match");
        continue;
      }
      if (!f[11].empty()) {
        const double comp = io::parse_double(f[8]), exp = io::parse_double(f[10]), dev = io::parse_double(f[11]);
        if (!close_rel(dev, std::abs(comp - exp) / std::abs(exp), 1e-9)) rep.fail(n, "rel_dev inconsistent");
      }
    }
  } else if (header == io::kFigureHeader) {
    while (std::getline(in, line)) {
      ++n;
      if (line.empty()) continue;
      const auto f = io::split(line);
      if (f.size() != 8) {
        rep.fail(n, "expected 8 fields");
        continue;
      }
      ++rep.rows;
      const double x = io::parse_double(f[6]), mag = io::parse_double(f[7]);
      if (!(mag >= 0.0 && mag <= 1.0)) rep.fail(n, "magnitude outside [0, 1]");
      if (x == 0.0 && mag != 1.0) rep.fail(n, "magnitude at time 0 is not 1");
    }
  } else {
    throw ConfigError("unrecognized CSV header '" + header + "'");
  }
  return rep;
}

}  // namespace

int main(int argc, char** argv) {
  std::signal(SIGINT, on_interrupt);
  std::signal(SIGTERM, on_interrupt);

  CLI::App app{"Exact dephasing of qubit registers coupled to a bosonic bath"};
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file with option defaults (nested objects per subcommand)");
  std::string out_path;
  app.add_option("--out", out_path, "output path (default stdout)");
  app.require_subcommand(1);

  // single
  auto* single = app.add_subcommand("single", "single-qubit coherence trace");
  BathOptions s_bath;
  GridOptions s_grid;
  std::string s_method = "closed";
  s_bath.add(single);
  s_grid.add(single);
  single->add_option("--method", s_method, "closed or quadrature")
      ->check(CLI::IsMember({"closed", "quadrature"}))
      ->capture_default_str();

  // pair
  auto* pair = app.add_subcommand("pair", "two-qubit coherence trace");
  BathOptions p_bath;
  GridOptions p_grid;
  std::string p_coupling = "independent", p_case = "both-differ", p_branch = "plus", p_method = "closed";
  double p_ts = 0.5;
  p_bath.add(pair);
  p_grid.add(pair);
  pair->add_option("--coupling", p_coupling)->check(CLI::IsMember({"independent", "collective"}))->capture_default_str();
  pair->add_option("--case", p_case)->check(CLI::IsMember({"one-differs", "both-differ"}))->capture_default_str();
  pair->add_option("--branch", p_branch)->check(CLI::IsMember({"plus", "minus"}))->capture_default_str();
  pair->add_option("--ts", p_ts, "transit time omega_c t_s")->capture_default_str();
  pair->add_option("--method", p_method, "closed, literal or quadrature")
      ->check(CLI::IsMember({"closed", "literal", "quadrature"}))
      ->capture_default_str();

  // register
  auto* reg = app.add_subcommand("register", "arbitrary L-qubit elements");
  BathOptions r_bath;
  GridOptions r_grid;
  std::vector<std::string> r_labels;
  std::string r_labels_file, r_geometry_file, r_modes_file, r_coupling = "independent", r_method = "closed";
  std::vector<double> r_positions;
  r_bath.add(reg);
  r_grid.add(reg);
  reg->add_option("--label", r_labels, "element as I,J (repeatable)");
  reg->add_option("--labels", r_labels_file, "file with one I,J label per line");
  reg->add_option("--geometry", r_geometry_file, "JSON with 'positions' or 'transit'");
  reg->add_option("--positions", r_positions, "collinear qubit positions")->delimiter(',');
  reg->add_option("--coupling", r_coupling)->check(CLI::IsMember({"independent", "collective"}))->capture_default_str();
  reg->add_option("--method", r_method, "closed, quadrature or oracle")
      ->check(CLI::IsMember({"closed", "quadrature", "oracle"}))
      ->capture_default_str();
  reg->add_option("--modes", r_modes_file, "modes file for --method oracle");

  // table / figure
  auto* table = app.add_subcommand("table", "reproduce a decoherence-time table");
  int table_id = 0;
  table->add_option("id", table_id, "1, 2 or 3")->required();
  auto* figure = app.add_subcommand("figure", "grid data for a figure");
  int figure_id = 0;
  figure->add_option("id", figure_id, "1 to 8")->required();

  // gen-modes
  auto* gen = app.add_subcommand("gen-modes", "Riemann-sample a bath into a modes file");
  BathOptions g_bath;
  std::size_t g_count = 10000;
  double g_xmax = 60.0;
  std::vector<double> g_positions;
  std::string g_geometry_file;
  g_bath.add(gen);
  gen->add_option("--count", g_count, "number of modes")->capture_default_str();
  gen->add_option("--xmax", g_xmax, "largest sampled frequency")->capture_default_str();
  gen->add_option("--positions", g_positions, "collinear qubit positions")->delimiter(',');
  gen->add_option("--geometry", g_geometry_file, "JSON geometry (must be collinear)");

  // verify
  auto* verify = app.add_subcommand("verify", "re-read a CSV written by this tool and check its invariants");
  std::string v_file;
  verify->add_option("file", v_file)->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*single) {
      const BathSpec bath = s_bath.spec();
      const bool quad = s_method == "quadrature";
      if (!quad) closed::require_closed_form(bath);
      auto f = [&](double t) {
        DecoherenceFunctions fn;
        fn.gamma = quad ? gamma_single(bath, t) : closed::gamma_single(bath, t);
        return make_coherence(fn);
      };
      if (s_grid.times) {
        const auto curve = quad ? curve_from(f) : single_curve(bath);
        const double horizon = quad ? std::max(s_grid.tmax, 1e-6) : kDefaultHorizon;
        DecoherenceTimes t{find_tau_dec(curve, horizon), find_t_f(curve, horizon), false};
        t.recoherence = detect_recoherence(sample_trace(curve, s_grid.taus()));
        emit(out_path, [&](std::ostream& o) {
          write_times(o, t, {{"command", "single"}, {"d", bath.d()}, {"c", bath.c()}, {"theta", bath.theta()}});
        });
      } else {
        write_functions_trace(out_path, s_grid.taus(), f);
      }
    } else if (*pair) {
      const BathSpec bath = p_bath.spec();
      if (!(p_ts >= 0.0)) throw ConfigError("--ts must be >= 0");
      const PairCase pc = p_case == "one-differs" ? PairCase::OneDiffers : PairCase::BothDiffer;
      const Branch br = p_branch == "plus" ? Branch::Plus : Branch::Minus;
      const bool collective = p_coupling == "collective";
      const char* label_text = pc == PairCase::BothDiffer ? (br == Branch::Plus ? "11,00" : "10,01")
                                                          : (br == Branch::Plus ? "00,01" : "01,00");
      const CoherenceLabel label = CoherenceLabel::parse(label_text);
      const RegisterGeometry geom = RegisterGeometry::pair(p_ts);
      const Method method = parse_method(p_method);
      if (method == Method::Closed) closed::require_closed_form(bath);
      std::function<RegisterCoherence(double)> f;
      if (p_method == "literal") {
        f = [=](double t) {
          const auto v = collective ? closed::pair_collective(bath, t, pc, br)
                                    : closed::pair_independent(bath, t, p_ts, pc, br);
          DecoherenceFunctions fn{v.gamma, v.phase, 0.0, v.phase};
          return make_coherence(fn);
        };
      } else if (collective) {
        f = [=](double t) { return coherence_collective(bath, label, t, method); };
      } else {
        f = [=](double t) { return coherence_independent(bath, geom, label, t, method); };
      }
      if (p_grid.times) {
        const bool quad = method == Method::Quadrature;
        double limit = std::numeric_limits<double>::quiet_NaN();
        if (!quad)
          limit = collective ? closed::pair_collective_limit(bath, pc, br)
                             : closed::pair_independent_limit(bath, p_ts, pc, br);
        const auto curve = curve_from(f, collective ? std::vector<double>{} : std::vector<double>{p_ts}, limit);
        const double horizon = quad ? std::max(p_grid.tmax, 1e-6) : kDefaultHorizon;
        DecoherenceTimes t{find_tau_dec(curve, horizon), find_t_f(curve, horizon), false};
        t.recoherence = detect_recoherence(
            sample_trace(curve, quad ? p_grid.taus() : recoherence_grid(curve.features)));
        emit(out_path, [&](std::ostream& o) {
          write_times(o, t,
                      {{"command", "pair"}, {"coupling", p_coupling}, {"case", p_case}, {"branch", p_branch},
                       {"d", bath.d()}, {"c", bath.c()}, {"theta", bath.theta()}, {"ts", p_ts}});
        });
      } else {
        write_functions_trace(out_path, p_grid.taus(), f);
      }
    } else if (*reg) {
      const BathSpec bath = r_bath.spec();
      if (r_grid.times) throw ConfigError("--times is available for single and pair only");
      std::vector<CoherenceLabel> labels;
      for (const auto& s : r_labels) labels.push_back(CoherenceLabel::parse(s));
      if (!r_labels_file.empty()) {
        std::ifstream in(r_labels_file);
        if (!in) throw ConfigError("cannot read labels file '" + r_labels_file + "'");
        for (const auto& line : io::read_lines(in)) labels.push_back(CoherenceLabel::parse(line));
      }
      if (labels.empty()) throw ConfigError("no labels given (--label or --labels)");
      const std::size_t L = labels.front().size();
      for (const auto& l : labels)
        if (l.size() != L) throw ConfigError("all labels must cover the same number of qubits");
      const Method method = parse_method(r_method);
      const auto taus = r_grid.taus();
      if (method == Method::Closed) closed::require_closed_form(bath);
      ModeSet modes;
      if (method == Method::Oracle) {
        if (r_modes_file.empty()) throw ConfigError("--method oracle needs --modes");
        modes = load_modes(r_modes_file);
      }
      const RegisterGeometry geom = load_geometry(r_geometry_file, r_positions, L);
      if (geom.size() != L) throw ConfigError("geometry and labels cover different registers");
      const bool collective = r_coupling == "collective";
      emit(out_path, [&](std::ostream& o) {
        o << "label," << io::kTraceHeader << '\n';
        for (const auto& l : labels) {
          for (double t : taus) {
            RegisterCoherence r;
            if (method == Method::Oracle)
              r = coherence_discrete(modes, l, bath.theta(), t);
            else if (collective)
              r = coherence_collective(bath, l, t, method);
            else
              r = coherence_independent(bath, geom, l, t, method);
            o << l.to_string() << ',';
            io::write_trace_row(o, t, r.functions, r.value);
          }
        }
      });
    } else if (*table) {
      if (table_id < 1 || table_id > 3) throw ConfigError("unknown table " + std::to_string(table_id));
      const Table t = make_table(table_id);
      emit(out_path, [&](std::ostream& o) { io::write_table_csv(o, t); });
    } else if (*figure) {
      if (figure_id < 1 || figure_id > 8) throw ConfigError("unknown figure " + std::to_string(figure_id));
      const Figure f = make_figure(figure_id);
      emit(out_path, [&](std::ostream& o) { io::write_figure_csv(o, f); });
    } else if (*gen) {
      const BathSpec bath = g_bath.spec();
      std::vector<double> positions = g_positions;
      if (!g_geometry_file.empty()) positions = collinear_positions(load_geometry(g_geometry_file, {}, 0));
      if (positions.empty()) throw ConfigError("gen-modes needs --positions or --geometry");
      const ModeSet ms = riemann_modes(bath, positions, g_count, g_xmax);
      emit(out_path, [&](std::ostream& o) { io::write_modes(o, ms); });
    } else if (*verify) {
      std::ifstream in(v_file);
      if (!in) throw ConfigError("cannot read '" + v_file + "'");
      const auto rep = verify_csv(in);
      for (const auto& p : rep.problems) std::cerr << p << '\n';
      std::cout << (rep.problems.empty() ? "ok" : "FAILED") << ": " << rep.rows << " rows checked in " << v_file
                << '\n';
      return rep.problems.empty() ? kExitOk : kExitVerify;
    }
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
