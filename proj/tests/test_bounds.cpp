#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bitreset/bounds.hpp"
#include "bitreset/errors.hpp"
#include "test_support.hpp"

using namespace bitreset;
using namespace bitreset::testing;

namespace {

const BathParams kBath(1.0, 0.1);

double gamma1(double e1) { return thermal_state(kBath, EnergyLevel(e1)).p1(); }

double extra(const BoundReport& r, std::string_view key) {
  for (const auto& [k, v] : r.extras)
    if (k == key) return v;
  FAIL("missing extra " << key);
  return NAN;
}

}  // namespace

TEST_CASE("check verdicts") {
  BoundReport lower{"x", Side::lower, Quantity::work_penalty, 1.0, {}};
  CHECK(check(lower, 1.5) == Verdict::holds);
  CHECK(check(lower, 1.0) == Verdict::holds);
  CHECK(check(lower, 0.5) == Verdict::violated);
  BoundReport upper{"y", Side::upper, Quantity::reset_error, 1.0, {}};
  CHECK(check(upper, 0.5) == Verdict::holds);
  CHECK(check(upper, 1.5) == Verdict::violated);
  upper.value.reset();
  CHECK(check(upper, 1.5) == Verdict::not_applicable);
}

TEST_CASE("work penalty lower bound with the dissipation term") {
  const RunRecord sudden = run_discrete(DiscreteProtocol(10, 4.0, 0.0), kBath);
  CHECK_FALSE(penalty_lower_eq5(sudden, kBath).applicable());

  const RunRecord idle = run_discrete(DiscreteProtocol(10, 0.0, 50.0), kBath);
  CHECK(*penalty_lower_eq5(idle, kBath).value == doctest::Approx(idle.d_final));

  const RunRecord r = run_discrete(DiscreteProtocol(10, 4.0, 50.0), kBath);
  const BoundReport b = penalty_lower_eq5(r, kBath);
  const double expected = r.d_final + std::pow(1.0 - 2.0 * r.epsilon, 2) / (0.1 * 50.0);
  CHECK(*b.value == doctest::Approx(expected).epsilon(1e-14));
  CHECK(check(b, observed(r, b.target, kBath)) == Verdict::holds);

  const RunRecord slow = run_discrete(DiscreteProtocol(2000, 4.0, 1e7), kBath);
  CHECK(*penalty_lower_eq5(slow, kBath).value < 1e-3);
  CHECK(slow.w_pn < 1e-3);
}

TEST_CASE("relative entropy lower bound") {
  for (double e : {0.5, 4.0, 8.0}) {
    CAPTURE(e);
    const RunRecord sudden = run_discrete(DiscreteProtocol(10, e, 0.0), kBath);
    const BoundReport b0 = relent_lower_eq8(sudden, kBath, e);
    const double g1 = extra(b0, "G1");
    CHECK(*b0.value == doctest::Approx(g1).epsilon(1e-14));
    CHECK(g1 == doctest::Approx(0.5 * std::log((1.0 + std::cosh(e)) / 2.0)).epsilon(1e-13));
    CHECK(extra(b0, "G1_closed_form") == doctest::Approx(g1).epsilon(1e-13));

    const RunRecord slow = run_discrete(DiscreteProtocol(10, e, 2000.0), kBath);
    CHECK(*relent_lower_eq8(slow, kBath, e).value <= 1e-60);

    const RunRecord mid = run_discrete(DiscreteProtocol(10, e, 20.0), kBath);
    const BoundReport b = relent_lower_eq8(mid, kBath, e);
    CHECK(check(b, mid.d_final) == Verdict::holds);
    CHECK(*b.value >= 0.0);
  }
}

TEST_CASE("relative entropy upper bound for the staircase") {
  const DiscreteProtocol sudden(10, 4.0, 0.0);
  const RunRecord r0 = run_discrete(sudden, kBath);
  CHECK(*relent_upper_eq10(kBath, sudden).value == doctest::Approx(r0.d_final).epsilon(1e-12));
  CHECK(*relent_upper_eq10(kBath, DiscreteProtocol(10, 0.0, 5.0)).value == 0.0);
  for (double tau : geomspace(0.1, 500.0, 20)) {
    const DiscreteProtocol p(10, 4.0, tau);
    CHECK(check(relent_upper_eq10(kBath, p), run_discrete(p, kBath).d_final) == Verdict::holds);
  }
}

TEST_CASE("sigma dominance threshold") {
  CHECK(sigma_dominance_threshold(10, kBath) == doctest::Approx(10.0 * std::numbers::ln2 / 0.2).epsilon(1e-14));
  CHECK(sigma_dominance_threshold(10, kBath) == doctest::Approx(34.657359).epsilon(1e-7));
  CHECK_FALSE(sigma_dominates_eq11(DiscreteProtocol(10, 4.0, 34.0), kBath));
  CHECK(sigma_dominates_eq11(DiscreteProtocol(10, 4.0, 35.0), kBath));
}

TEST_CASE("staircase work penalty sandwich") {
  CHECK(*penalty_lower_eq12(DiscreteProtocol(10, 0.0, 5.0), kBath).value == 0.0);
  CHECK(*penalty_lower_eq12(DiscreteProtocol(1, 4.0, 5.0), kBath).value == doctest::Approx(0.0).epsilon(1e-15));

  const DiscreteProtocol sudden(10, 4.0, 0.0);
  CHECK(*penalty_upper_eq13(sudden, kBath).value >= run_discrete(sudden, kBath).w_pn);
  CHECK(*penalty_upper_eq13(DiscreteProtocol(1000, 4.0, 1e5), kBath).value < 3e-3);

  for (int n : {1, 3, 10, 30}) {
    for (double tau : geomspace(0.1, 500.0, 15)) {
      const DiscreteProtocol p(n, 4.0, tau);
      const double w = run_discrete(p, kBath).w_pn;
      CHECK(check(penalty_lower_eq12(p, kBath), w) == Verdict::holds);
      CHECK(check(penalty_upper_eq13(p, kBath), w) == Verdict::holds);
    }
  }
}

TEST_CASE("reset error lower bound") {
  const DiscreteProtocol slow(10, 4.0, 1e5);
  CHECK(*epsilon_lower_eq14(slow, kBath).value == doctest::Approx(gamma1(4.0)).epsilon(1e-13));
  CHECK(*epsilon_lower_eq14(DiscreteProtocol(10, 0.0, 5.0), kBath).value == doctest::Approx(0.5));
  for (double tau : geomspace(0.1, 500.0, 20)) {
    const DiscreteProtocol p(10, 4.0, tau);
    CHECK(check(epsilon_lower_eq14(p, kBath), run_discrete(p, kBath).epsilon) == Verdict::holds);
  }
}

TEST_CASE("E_max sandwich") {
  const EmaxSandwich s = emax_sandwich_eq15(0.1, 1, kBath);
  CHECK(s.lower == doctest::Approx(std::log(9.0)));
  CHECK_FALSE(s.upper.has_value());

  // the quasistatic solve sits on the lower edge
  CHECK(std::abs(solve_emax_discrete(0.1, 10, 1e6, kBath) - s.lower) <= 1e-8);

  // (2 eps)^{1/N}/2 >= eps on (0, 1/2], so the upper edge never applies
  for (int trial = 0; trial < 2000; ++trial) {
    const double eps = uniform(1e-9, 0.5 - 1e-9);
    REQUIRE_FALSE(emax_sandwich_eq15(eps, uniform_int(1, 200), kBath).upper.has_value());
  }
  CHECK_THROWS_AS(emax_sandwich_eq15(0.0, 3, kBath), InvalidArgument);
  CHECK_THROWS_AS(emax_sandwich_eq15(0.5, 3, kBath), InvalidArgument);
}

TEST_CASE("relative entropy upper bound from the reset error") {
  const RunRecord sudden = run_discrete(DiscreteProtocol(10, 4.0, 0.0), kBath);
  const BoundReport b0 = relent_upper_eq16(sudden, kBath, 4.0);
  CHECK(*b0.value == doctest::Approx(std::log1p(std::exp(4.0))));
  CHECK(check(b0, sudden.d_final) == Verdict::holds);

  // applicable up to tau = ln(1/eps)/mu
  const RunRecord r = run_continuous(ContinuousProtocol(1.0, 30.0), kBath);
  const double tau_d = std::log(1.0 / r.epsilon) / 0.1;
  const BoundReport b = relent_upper_eq16(r, kBath, r.e_max);
  CHECK(extra(b, "tau_D") == doctest::Approx(tau_d));
  CHECK(b.applicable() == (30.0 <= tau_d));

  for (double delta : {0.0, 1.0, 3.0}) {
    for (double tau : geomspace(0.1, 50.0, 12)) {
      const RunRecord c = run_continuous(ContinuousProtocol(delta, tau), kBath);
      CHECK(check(relent_upper_eq16(c, kBath, c.e_max), c.d_final) != Verdict::violated);
    }
  }
}

TEST_CASE("relative entropy upper bound from the schedule endpoints") {
  const ContinuousProtocol p(0.0, 30.0);
  const RunRecord r = run_continuous(p, kBath);
  const BoundReport b = relent_upper_eq17(r, kBath, p.schedule(kBath));
  const double g = relative_entropy(thermal_state(kBath, EnergyLevel(0.0)), thermal_state(kBath, EnergyLevel(r.e_max)));
  CHECK(*b.value == doctest::Approx(g).epsilon(1e-13));

  const ContinuousProtocol far(2.0, 1e4);
  const RunRecord rf = run_continuous(far, kBath);
  const double g_plus =
      relative_entropy_to_thermal(thermal_state(kBath, EnergyLevel(2.0)), kBath, EnergyLevel(rf.e_max));
  CHECK(*relent_upper_eq17(rf, kBath, far.schedule(kBath)).value == doctest::Approx(g_plus).epsilon(1e-10));

  for (double delta : {0.0, 0.5, 1.0, 3.0}) {
    for (double tau : geomspace(0.1, 50.0, 12)) {
      const ContinuousProtocol c(delta, tau);
      const RunRecord rc = run_continuous(c, kBath);
      CHECK(check(relent_upper_eq17(rc, kBath, c.schedule(kBath)), rc.d_final) == Verdict::holds);
    }
  }
}

TEST_CASE("bound collections keep a fixed order") {
  const DiscreteProtocol p(10, 4.0, 50.0);
  const auto d = discrete_bounds(run_discrete(p, kBath), p, kBath);
  REQUIRE(d.size() == 8);
  const ContinuousProtocol c(1.0, 30.0);
  const auto cb = continuous_bounds(run_continuous(c, kBath), c, kBath);
  REQUIRE(cb.size() == 4);
  for (const auto& b : d) CHECK_FALSE(b.name.empty());
}
