#include <catch_amalgamated.hpp>

#include <limits>
#include <random>
#include <sstream>

#include <qrdeco/io.hpp>

using namespace qrdeco;

TEST_CASE("number formatting round-trips") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> ex(-300, 300);
  for (int k = 0; k < 2000; ++k) {
    const double v = std::ldexp(mant(rng), ex(rng));
    CHECK(io::parse_double(io::fmt(v)) == v);
  }
  CHECK(io::fmt(0.5) == "0.5");
  CHECK(io::fmt(1e-5) == "1e-05");
  CHECK(io::fmt(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(std::isnan(io::parse_double(io::fmt(std::nan("")))));
  CHECK(io::parse_double(" 2.5\r") == 2.5);
  CHECK_THROWS_AS(io::parse_double("2.5x"), ConfigError);
  CHECK_THROWS_AS(io::parse_double(""), ConfigError);
}

TEST_CASE("split and comment handling") {
  CHECK(io::split("a,,b") == std::vector<std::string>{"a", "", "b"});
  std::istringstream in("# header\n\n1,2\r\n  # indented\n3,4\n");
  CHECK(io::read_lines(in) == std::vector<std::string>{"1,2", "3,4"});
}

TEST_CASE("modes file round-trip") {
  const auto ms = riemann_modes(BathSpec(3, 0.1, 1.0), {0.0, -0.5, -1.25}, 50);
  std::ostringstream out;
  io::write_modes(out, ms);
  std::istringstream in(out.str());
  const auto back = io::read_modes(in);
  REQUIRE(back.qubits == 3);
  REQUIRE(back.modes.size() == 50);
  for (std::size_t k = 0; k < 50; ++k) {
    CHECK(back.modes[k].x == ms.modes[k].x);
    CHECK(back.modes[k].weight == ms.modes[k].weight);
    CHECK(back.modes[k].phases == ms.modes[k].phases);
  }
}

TEST_CASE("modes file errors") {
  std::istringstream ragged("1,1,0,0\n2,1,0\n");
  CHECK_THROWS_AS(io::read_modes(ragged), ConfigError);
  std::istringstream short_line("1,1\n");
  CHECK_THROWS_AS(io::read_modes(short_line), ConfigError);
  std::istringstream negative("1,-1,0\n");
  CHECK_THROWS_AS(io::read_modes(negative), ConfigError);
  std::istringstream empty("# nothing\n");
  CHECK(io::read_modes(empty).modes.empty());
}

TEST_CASE("trace csv") {
  const auto curve = single_curve(BathSpec(3, 0.25, 1.0));
  const auto tr = sample_trace(curve, {0.0, 1.0});
  std::ostringstream out;
  io::write_trace_csv(out, tr);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == io::kTraceHeader);
  std::getline(in, line);
  CHECK(line == "0,0,0,0,1,0");
  std::getline(in, line);
  const auto f = io::split(line);
  REQUIRE(f.size() == 6);
  CHECK(io::parse_double(f[1]) == tr.values[1].gamma);
  CHECK(io::parse_double(f[4]) == tr.values[1].magnitude());
}

TEST_CASE("table csv") {
  Table t{3, 1e-3, {}};
  TableRow r{3, 0.25, 1.0, std::nullopt, {}, {}};
  r.cells.push_back(compare_cell("t_f", TableValue::sat(0.5), TableValue::sat(0.5), 1e-3));
  r.cells.push_back(compare_cell("tau_dec", TableValue::time(1.0), TableValue::time(2.0), 1e-3));
  t.rows.push_back(r);
  std::ostringstream out;
  io::write_table_csv(out, t);
  std::istringstream in(out.str());
  const auto lines = io::read_lines(in);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == io::kTableHeader);
  CHECK(lines[1] == "3,1,3,0.25,1,,t_f,saturates,0.5,saturates,0.5,0,1");
  CHECK(lines[2] == "3,1,3,0.25,1,,tau_dec,value,1,value,2,0.5,0");
}

TEST_CASE("figure csv") {
  Figure f{9, {{"i", "plus", "ts", "tau", {0.5}, {0.0, 1.0}, {{1.0, 0.25}}}}};
  std::ostringstream out;
  io::write_figure_csv(out, f);
  CHECK(out.str() == std::string(io::kFigureHeader) + "\n9,i,plus,ts,0.5,tau,0,1\n9,i,plus,ts,0.5,tau,1,0.25\n");
}
