#include "bitreset/verify.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "bitreset/bounds.hpp"
#include "bitreset/errors.hpp"
#include "bitreset/protocols.hpp"
#include "bitreset/sweep.hpp"

namespace bitreset {

namespace {

constexpr double kIdentityTol = 1e-10;
constexpr double kSignTol = 1e-14;

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

std::vector<double> geomspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = std::exp(std::log(a) + (std::log(b) - std::log(a)) * i / (n - 1));
  return v;
}

class Checker {
 public:
  explicit Checker(VerificationReport& report) : report_(report) {}

  void context(std::string ctx) { context_ = std::move(ctx); }

  // Passes when bound <= observed (lower) or bound >= observed (upper), up to tol.
  void expect_le(const std::string& name, double lhs, double rhs, double tol) {
    ++report_.checks;
    if (!(lhs <= rhs + tol)) report_.violations.push_back({name, context_, lhs, rhs});
  }

  void bound(const BoundReport& r, double obs) {
    ++report_.checks;
    switch (check(r, obs)) {
      case Verdict::holds: break;
      case Verdict::not_applicable: ++report_.not_applicable; break;
      case Verdict::violated: report_.violations.push_back({r.name, context_, *r.value, obs}); break;
    }
  }

  void fail(const std::string& name, const std::string& why) {
    ++report_.checks;
    report_.violations.push_back({name + ": " + why, context_, std::nan(""), std::nan("")});
  }

 private:
  VerificationReport& report_;
  std::string context_;
};

std::string describe_bath(const BathParams& bath) {
  return "beta=" + format_number(bath.beta()) + " mu=" + format_number(bath.mu());
}

void common_run_checks(Checker& c, const RunRecord& run, const std::vector<BoundReport>& reports,
                       const BathParams& bath) {
  c.expect_le("identity beta*W_pn = D + Sigma", std::abs(bath.beta() * run.w_pn - run.d_final - run.sigma), 0.0,
              kIdentityTol);
  c.expect_le("W_pn >= 0", 0.0, run.w_pn, kSignTol);
  c.expect_le("Sigma >= 0", 0.0, run.sigma, 1e-12);
  c.expect_le("epsilon >= gamma1(E_max)", thermal_state(bath, EnergyLevel(run.e_max)).p1(), run.epsilon, kSignTol);
  for (const BoundReport& r : reports) c.bound(r, observed(run, r.target, bath));

  // lower relative-entropy bound stays below every applicable upper one
  const BoundReport* lower = nullptr;
  for (const BoundReport& r : reports) {
    if (r.name == "lb_eq8") lower = &r;
  }
  for (const BoundReport& r : reports) {
    if (lower && r.target == Quantity::relative_entropy && r.side == Side::upper && r.applicable()) {
      c.expect_le("lb_eq8 <= " + r.name, *lower->value, *r.value, kBoundTolerance);
    }
  }
}

}  // namespace

VerificationReport verify_all(const VerifyOptions& options) {
  VerificationReport report;
  Checker c(report);
  const BathParams& bath = options.bath;
  const int n = options.n_steps;

  std::vector<double> taus = geomspace(0.1, 200.0, 10);
  taus.insert(taus.begin(), 0.0);
  taus.push_back(sigma_dominance_threshold(n, bath));
  taus.push_back(4.0 * sigma_dominance_threshold(n, bath));

  for (double e_max : linspace(0.5, 8.0, 10)) {
    for (double tau : taus) {
      const DiscreteProtocol proto(n, e_max, tau);
      std::ostringstream ctx;
      ctx << "discrete N=" << n << " e_max=" << format_number(e_max) << " tau=" << format_number(tau) << ' '
          << describe_bath(bath);
      c.context(ctx.str());
      const RunRecord run = run_discrete(proto, bath);
      common_run_checks(c, run, discrete_bounds(run, proto, bath), bath);

      const double telescoped = std::accumulate(run.step_d.begin(), run.step_d.end(), 0.0);
      c.expect_le("sum D^k = D", std::abs(telescoped - run.d_final), 0.0, 1e-12);
      for (double s : run.step_sigma) c.expect_le("Sigma^k >= 0", 0.0, s, kSignTol);
      if (sigma_dominates_eq11(proto, bath)) c.expect_le("eq11 dominance D <= Sigma", run.d_final, run.sigma, 1e-12);
      if (tau == 0.0) {
        c.expect_le("tau=0 limit W_pn = E_max/2 - W_qs",
                    std::abs(run.w_pn - (e_max / 2.0 - quasistatic_work(bath, e_max))), 0.0, 1e-13);
      }
    }
  }

  for (double delta : {0.0, 0.5, 1.0, 3.0}) {
    for (double tau : geomspace(0.1, 50.0, 10)) {
      const ContinuousProtocol proto(delta, tau);
      std::ostringstream ctx;
      ctx << "continuous delta=" << format_number(delta) << " tau=" << format_number(tau) << ' '
          << describe_bath(bath);
      c.context(ctx.str());
      try {
        const RunRecord run = run_continuous(proto, bath);
        common_run_checks(c, run, continuous_bounds(run, proto, bath), bath);
      } catch (const NumericalError& e) {
        c.fail("continuous run", e.what());
      }
    }
  }

  for (double eps : {0.01, 0.05, 0.1, 0.2, 0.4}) {
    for (double tau : geomspace(1.0, 200.0, 8)) {
      std::ostringstream ctx;
      ctx << "solve N=" << n << " epsilon=" << format_number(eps) << " tau=" << format_number(tau) << ' '
          << describe_bath(bath);
      c.context(ctx.str());
      const bool feasible = eps > reset_error_floor(tau, bath);
      try {
        const double e_max = solve_emax_discrete(eps, n, tau, bath);
        if (!feasible) c.fail("solve_emax_discrete", "accepted a target at or below the floor");
        const RunRecord run = run_discrete(DiscreteProtocol(n, e_max, tau), bath);
        c.expect_le("solve round trip", std::abs(run.epsilon - eps), 0.0, 1e-9);
        const EmaxSandwich s = emax_sandwich_eq15(eps, n, bath);
        c.expect_le("emax_lb_eq15", s.lower, e_max, 1e-9);
        if (s.upper) c.expect_le("emax_ub_eq15", e_max, *s.upper, 1e-9);
      } catch (const InfeasibleTarget&) {
        if (feasible) c.fail("solve_emax_discrete", "rejected a feasible target");
        else ++report.checks;
      }
    }
  }
  return report;
}

}  // namespace bitreset
