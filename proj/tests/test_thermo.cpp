#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bitreset/errors.hpp"
#include "bitreset/thermo.hpp"
#include "test_support.hpp"

using namespace bitreset;
using namespace bitreset::testing;

TEST_CASE("thermal_state closed forms") {
  const BathParams bath(1.0, 0.1);
  CHECK(thermal_state(bath, EnergyLevel(0.0)).p1() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(thermal_state(bath, EnergyLevel(std::log(3.0))).p1() == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(thermal_state(bath, EnergyLevel(1e6)).p1() == 0.0);
  CHECK(thermal_state(bath, EnergyLevel(INFINITY)).p1() == 0.0);
}

TEST_CASE("thermal_state obeys detailed balance") {
  for (int i = 0; i < 2000; ++i) {
    const double beta = uniform(0.05, 5.0);
    const double e1 = uniform(0.0, 700.0 / beta);
    const TwoLevelState g = thermal_state(BathParams(beta, 1.0), EnergyLevel(e1));
    const double ratio = g.p1() / g.p0();
    const double expected = std::exp(-beta * e1);
    REQUIRE(std::abs(ratio - expected) <= 1e-12 * expected);
  }
}

TEST_CASE("domain types reject invalid values") {
  CHECK_THROWS_AS(BathParams(0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(BathParams(1.0, -0.1), InvalidArgument);
  CHECK_THROWS_AS(BathParams(NAN, 1.0), InvalidArgument);
  CHECK_THROWS_AS(TwoLevelState(1.2), InvalidArgument);
  CHECK_THROWS_AS(TwoLevelState(-1e-9), InvalidArgument);
  CHECK_THROWS_AS(EnergyLevel(-1.0), InvalidArgument);
}

TEST_CASE("relative_entropy closed forms") {
  const BathParams bath(1.0, 0.1);
  CHECK(relative_entropy(TwoLevelState(0.5), TwoLevelState(0.5)) == 0.0);

  for (double e : {0.5, 2.0, 10.0, 30.0}) {
    CAPTURE(e);
    const TwoLevelState g = thermal_state(bath, EnergyLevel(e));
    // deterministic "1" against gamma: ln(1/gamma1) = ln(1 + e^E)
    CHECK(relative_entropy(TwoLevelState(1.0), g) == doctest::Approx(std::log1p(std::exp(e))).epsilon(1e-13));
    CHECK(relative_entropy(TwoLevelState(0.5), g) ==
          doctest::Approx(0.5 * std::log((1.0 + std::cosh(e)) / 2.0)).epsilon(1e-13));
  }
}

TEST_CASE("relative_entropy signals infinite divergence") {
  CHECK_THROWS_AS(relative_entropy(TwoLevelState(0.3), TwoLevelState(0.0)), InfiniteDivergence);
  CHECK_THROWS_AS(relative_entropy(TwoLevelState(0.3), TwoLevelState(1.0)), InfiniteDivergence);
  CHECK(relative_entropy(TwoLevelState(0.0), TwoLevelState(0.0)) == 0.0);
  CHECK(relative_entropy(TwoLevelState(1.0), TwoLevelState(1.0)) == 0.0);
}

TEST_CASE("relative_entropy is nonnegative and vanishes on the diagonal") {
  for (int i = 0; i < 5000; ++i) {
    const double p = uniform(0.0, 1.0);
    const double q = uniform(1e-12, 1.0 - 1e-12);
    REQUIRE(relative_entropy(TwoLevelState(p), TwoLevelState(q)) >= 0.0);
    const double q_near = std::clamp(p + uniform(-1e-15, 1e-15), 1e-300, 1.0 - 1e-16);
    REQUIRE(relative_entropy(TwoLevelState(p), TwoLevelState(q_near)) <= 1e-14);
    if (std::abs(p - q) > 1e-6) REQUIRE(relative_entropy(TwoLevelState(p), TwoLevelState(q)) > 0.0);
  }
}

TEST_CASE("relative_entropy grows with p1 above q1") {
  for (double q : {1e-6, 0.01, 0.2, 0.45}) {
    const auto grid = linspace(q, 1.0, 400);
    for (std::size_t i = 1; i < grid.size(); ++i) {
      const double lo = relative_entropy(TwoLevelState(grid[i - 1]), TwoLevelState(q));
      const double hi = relative_entropy(TwoLevelState(grid[i]), TwoLevelState(q));
      REQUIRE(hi - lo >= -1e-15);
    }
  }
}

TEST_CASE("relative_entropy_to_thermal agrees with the direct form") {
  for (int i = 0; i < 2000; ++i) {
    const BathParams bath(uniform(0.2, 3.0), 1.0);
    const EnergyLevel level(uniform(0.0, 20.0));
    const TwoLevelState p(uniform(0.0, 1.0));
    const double direct = relative_entropy(p, thermal_state(bath, level));
    REQUIRE(relative_entropy_to_thermal(p, bath, level) == doctest::Approx(direct).epsilon(1e-12).scale(1.0));
  }
  // stays finite where gamma1 underflows
  const BathParams bath(1.0, 1.0);
  CHECK(std::isfinite(relative_entropy_to_thermal(TwoLevelState(0.5), bath, EnergyLevel(2000.0))));
  CHECK(relative_entropy_to_thermal(TwoLevelState(0.5), bath, EnergyLevel(2000.0)) ==
        doctest::Approx(0.5 * 2000.0 - std::numbers::ln2).epsilon(1e-12));
}

TEST_CASE("quasistatic_work limits") {
  const BathParams bath(1.0, 0.1);
  CHECK(quasistatic_work(bath, 0.0) == 0.0);
  CHECK(quasistatic_work(bath, std::log(3.0)) == doctest::Approx(std::log(1.5)).epsilon(1e-14));
  CHECK(quasistatic_work(bath, 1e4) == doctest::Approx(std::numbers::ln2).epsilon(1e-15));
  CHECK(quasistatic_work(BathParams(2.0, 1.0), 1e4) == doctest::Approx(std::numbers::ln2 / 2.0).epsilon(1e-15));
  CHECK_THROWS_AS(quasistatic_work(bath, -1.0), InvalidArgument);

  double prev = 0.0;
  for (double e : linspace(0.0, 50.0, 500)) {
    const double w = quasistatic_work(bath, e);
    REQUIRE(w >= prev);
    REQUIRE(w <= std::numbers::ln2);
    prev = w;
  }
}

TEST_CASE("quasistatic_work equals the integral of gamma1") {
  // composite Simpson, 20000 panels: independent of the closed form
  for (double beta : {0.5, 1.0, 3.0}) {
    const BathParams bath(beta, 1.0);
    for (double e_max : {0.3, 2.0, 8.0, 25.0}) {
      const int n = 20000;
      const double h = e_max / n;
      double sum = 0.0;
      for (int i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        sum += w * thermal_state(bath, EnergyLevel(i * h)).p1();
      }
      const double integral = sum * h / 3.0;
      CAPTURE(beta);
      CAPTURE(e_max);
      CHECK(std::abs(quasistatic_work(bath, e_max) - integral) <= 1e-9 * integral);
    }
  }
}
