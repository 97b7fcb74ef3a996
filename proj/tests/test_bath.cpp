#include <catch_amalgamated.hpp>

#include <cmath>

#include <qrdeco/bath.hpp>

using namespace qrdeco;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("BathSpec validates its parameters") {
  CHECK_THROWS_AS(BathSpec(0, 0.25, 0.0), ConfigError);
  CHECK_THROWS_AS(BathSpec(1, 0.0, 0.0), ConfigError);
  CHECK_THROWS_AS(BathSpec(1, -1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(BathSpec(3, 0.25, -1e-9), ConfigError);
  CHECK(BathSpec(1, 0.25, 0.0).has_closed_form());
  CHECK(BathSpec(3, 0.25, 1.0).has_closed_form());
  CHECK_FALSE(BathSpec(2, 0.25, 1.0).has_closed_form());
  CHECK(BathSpec(3, 0.25, 1.0).with_theta(0.0).theta() == 0.0);
}

TEST_CASE("spectral density") {
  CHECK(spectral_density(BathSpec(1, 0.25, 0.0), 0.0) == 0.0);
  CHECK_THAT(spectral_density(BathSpec(1, 1.0, 0.0), 1.0), WithinRel(std::exp(-1.0), 1e-15));
  // mpmath: 0.25 * 8 * e^-2
  CHECK_THAT(spectral_density(BathSpec(3, 0.25, 0.0), 2.0), WithinRel(0.270670566473225384, 1e-14));
  CHECK_THROWS_AS(spectral_density(BathSpec(1, 1.0, 0.0), -1e-3), DomainError);
  for (int d : {1, 2, 3, 5}) {
    const BathSpec b(d, 0.3, 0.0);
    double prev = 0.0;
    for (double x = 0.0; x < 400.0; x += 0.25) {
      const double v = spectral_density(b, x);
      CHECK(v >= 0.0);
      if (x > 50.0) CHECK(v <= prev);
      prev = v;
    }
    CHECK(spectral_density(b, 700.0) < 1e-250);
  }
}

TEST_CASE("thermal weight and occupation") {
  CHECK(thermal_weight(0.0, 5.0) == 1.0);
  CHECK_THAT(thermal_weight(1.0, 2.0), WithinRel(1.31303528549933130, 1e-14));
  CHECK_THAT(thermal_weight(1e6, 1.0), WithinRel(2e6, 1e-9));
  CHECK(occupation(0.0, 1.0) == 0.0);
  CHECK_THAT(occupation(1.0, 1.0), WithinRel(0.581976706869326424, 1e-14));
  CHECK_THAT(occupation(1.0, std::log(2.0)), WithinRel(1.0, 1e-14));
  CHECK_THROWS_AS(thermal_weight(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(thermal_weight(1.0, -1.0), DomainError);
  CHECK_THROWS_AS(occupation(1.0, 0.0), DomainError);

  SECTION("coth = 1 + 2 <N>") {
    for (double th : {1e-5, 1e-3, 0.1, 1.0, 10.0, 1e2, 1e4})
      for (double x : {1e-8, 1e-5, 1e-3, 0.1, 1.0, 3.0, 10.0, 60.0, 600.0}) {
        const double a = thermal_weight(th, x);
        const double b = 1.0 + 2.0 * occupation(th, x);
        CHECK(std::abs(a - b) <= 1e-14 * a);
      }
  }

  SECTION("monotone in x and theta") {
    for (double th : {1e-3, 1.0, 100.0}) {
      double prev = thermal_weight(th, 1e-6);
      for (double x = 1e-5; x < 100.0 * th; x *= 1.3) {
        const double v = thermal_weight(th, x);
        CHECK(v <= prev);
        CHECK(v >= 1.0);
        prev = v;
      }
    }
    for (double x : {1e-3, 1.0, 10.0}) {
      double prev = 1.0;
      for (double th = 1e-3; th < 1e3; th *= 1.5) {
        const double v = thermal_weight(th, x);
        CHECK(v >= prev);
        prev = v;
      }
    }
  }

  SECTION("small-argument series joins the direct form") {
    const double th = 1.0;
    const double y = 1e-4;  // crossover at x / 2 theta = 1e-4
    const double below = thermal_weight(th, 2.0 * th * y * (1.0 - 1e-9));
    const double above = thermal_weight(th, 2.0 * th * y * (1.0 + 1e-9));
    CHECK_THAT(below, WithinRel(above, 1e-8));
  }
}
