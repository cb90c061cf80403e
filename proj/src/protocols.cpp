#include "bitreset/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "bitreset/errors.hpp"
#include "bitreset/quadrature.hpp"

namespace bitreset {

namespace {

constexpr double kSolveTol = 1e-10;
constexpr int kMaxBisections = 200;
constexpr double kMaxEmaxBracket = 1e6;
constexpr double kMaxDelta = 1e4;
constexpr int kTrajectorySamples = 200;

std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void check_tau(double tau) {
  if (!(tau >= 0.0)) throw InvalidArgument("tau must be >= 0, got " + fmt_double(tau));
}

void check_target(double target_eps) {
  if (!(target_eps > 0.0 && target_eps <= 0.5)) {
    throw InvalidArgument("target epsilon must lie in (0, 1/2], got " + fmt_double(target_eps));
  }
}

[[noreturn]] void throw_below_floor(double target, double tau, const BathParams& bath) {
  const double floor = reset_error_floor(tau, bath);
  const double t0 = minimal_reset_time(target, bath);
  throw InfeasibleTarget(InfeasibleTarget::Kind::below_floor, target, floor, t0,
                         "infeasible target epsilon " + fmt_double(target) + ": the reset error floor at tau " +
                             fmt_double(tau) + " is " + fmt_double(floor) + "; minimal reset time tau0 = " +
                             fmt_double(t0));
}

// Bisection for a strictly decreasing g on [lo, hi] with g(lo) >= target > g(hi).
// Runs to floating resolution, then checks the residual.
double bisect_decreasing(const std::function<double(double)>& g, double target, double lo, double hi) {
  for (int i = 0; i < kMaxBisections; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double value = g(mid);
    if (value == target) return mid;
    (value > target ? lo : hi) = mid;
  }
  const double g_lo = g(lo);
  const double g_hi = g(hi);
  const double best = std::abs(g_lo - target) <= std::abs(g_hi - target) ? lo : hi;
  if (std::abs(g(best) - target) > kSolveTol) {
    throw NoBracket("bisection stalled at residual " + fmt_double(std::abs(g(best) - target)) +
                    "; the monotonicity assumption may be violated");
  }
  return best;
}

double discrete_epsilon(int n_steps, double e_max, double tau, const BathParams& bath) {
  // same arithmetic as run_discrete, without the bookkeeping
  TwoLevelState p = TwoLevelState::maximally_mixed();
  for (int k = 1; k <= n_steps; ++k) {
    p = swap_step(p, thermal_state(bath, EnergyLevel(e_max * k / n_steps)), bath, tau / n_steps);
  }
  return p.p1();
}

}  // namespace

DiscreteProtocol::DiscreteProtocol(int n_steps, double e_max, double tau)
    : n_steps_(n_steps), e_max_(e_max), tau_(tau) {
  if (n_steps < 1) throw InvalidArgument("n_steps must be >= 1, got " + std::to_string(n_steps));
  if (!(e_max >= 0.0) || !std::isfinite(e_max)) {
    throw InvalidArgument("e_max must be finite and >= 0, got " + fmt_double(e_max));
  }
  check_tau(tau);
}

ContinuousProtocol::ContinuousProtocol(double delta, double tau) : delta_(delta), tau_(tau) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw InvalidArgument("delta must be finite and >= 0, got " + fmt_double(delta));
  }
  check_tau(tau);
  if (!std::isfinite(tau)) throw InvalidArgument("continuous protocol needs a finite tau");
}

RunRecord run_discrete(const DiscreteProtocol& proto, const BathParams& bath) {
  const int n = proto.n_steps();
  const double dt = proto.step_duration();
  const double step_energy = proto.step_energy();

  RunRecord rec;
  rec.tau = proto.tau();
  rec.e_max = proto.e_max();
  rec.step_sigma.reserve(n);
  rec.step_d.reserve(n);
  rec.trajectory.reserve(2 * n + 1);

  TwoLevelState p = TwoLevelState::maximally_mixed();
  EnergyLevel level(0.0);
  rec.trajectory.push_back({0.0, 0.0, p.p1(), 0.5});
  double d_prev = 0.0;  // D[P^0 || gamma^0] = 0
  double population_sum = 0.0;
  double sigma = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double t_start = proto.tau() * (k - 1) / n;
    // jump at frozen population P^{k-1}
    population_sum += p.p1();
    level = EnergyLevel(proto.level(k));
    const TwoLevelState gamma = thermal_state(bath, level);
    rec.trajectory.push_back({t_start, level.e1(), p.p1(), gamma.p1()});

    const double d_before = relative_entropy_to_thermal(p, bath, level);
    const TwoLevelState next = swap_step(p, gamma, bath, dt);
    const double d_after = relative_entropy_to_thermal(next, bath, level);

    rec.step_sigma.push_back(d_before - d_after);
    rec.step_d.push_back(d_after - d_prev);
    sigma += d_before - d_after;
    d_prev = d_after;
    p = next;
    rec.trajectory.push_back({proto.tau() * k / n, level.e1(), p.p1(), gamma.p1()});
  }

  rec.work = step_energy * population_sum;
  rec.w_qs = quasistatic_work(bath, proto.e_max());
  rec.w_pn = rec.work - rec.w_qs;
  rec.d_final = d_prev;
  rec.sigma = sigma;
  rec.epsilon = p.p1();
  return rec;
}

RunRecord run_continuous(const ContinuousProtocol& proto, const BathParams& bath) {
  const double beta = bath.beta();
  const double mu = bath.mu();
  const double tau = proto.tau();
  const double delta = proto.delta();

  RunRecord rec;
  rec.tau = tau;
  rec.e_max = proto.e_max(bath);

  double population_integral = 0.0;
  if (tau > 0.0) {
    QuadratureOptions opts;
    opts.abs_tol = 1e-9 * beta / mu;  // tolerance on W, not on the bare integral
    // P1 varies on the 1/mu time scale; start from panels no wider than 10/mu.
    opts.initial_panels = static_cast<int>(std::min(1e5, std::ceil(mu * tau / 10.0)));
    auto p1 = [&](double t) { return linear_drive_p1(bath, delta, t).p1(); };
    population_integral = integrate_adaptive(p1, 0.0, tau, opts).value;
  }

  rec.work = delta / (2.0 * beta) + mu / beta * population_integral;
  rec.w_qs = quasistatic_work(bath, rec.e_max);
  rec.w_pn = rec.work - rec.w_qs;
  const TwoLevelState final_state = linear_drive_p1(bath, delta, tau);
  rec.epsilon = final_state.p1();
  rec.d_final = relative_entropy_to_thermal(final_state, bath, EnergyLevel(rec.e_max));
  rec.sigma = beta * rec.w_pn - rec.d_final;

  rec.trajectory.reserve(kTrajectorySamples + 1);
  for (int i = 0; i <= kTrajectorySamples; ++i) {
    const double t = tau * i / kTrajectorySamples;
    const double e1 = (mu * t + delta) / beta;
    rec.trajectory.push_back(
        {t, e1, linear_drive_p1(bath, delta, t).p1(), thermal_state(bath, EnergyLevel(e1)).p1()});
  }
  return rec;
}

double minimal_reset_time(double epsilon, const BathParams& bath) {
  check_target(epsilon);
  return -std::log(2.0 * epsilon) / bath.mu();
}

double reset_error_floor(double tau, const BathParams& bath) {
  check_tau(tau);
  return 0.5 * std::exp(-bath.mu() * tau);
}

double solve_emax_discrete(double target_eps, int n_steps, double tau, const BathParams& bath) {
  check_target(target_eps);
  check_tau(tau);
  if (n_steps < 1) throw InvalidArgument("n_steps must be >= 1");
  if (target_eps <= reset_error_floor(tau, bath)) throw_below_floor(target_eps, tau, bath);
  if (target_eps == 0.5) return 0.0;

  auto eps_of = [&](double e_max) { return discrete_epsilon(n_steps, e_max, tau, bath); };
  double lo = 0.0;
  double hi = 1.0;
  while (eps_of(hi) >= target_eps) {
    lo = hi;
    hi *= 2.0;
    if (hi > kMaxEmaxBracket) {
      throw NoBracket("could not bracket e_max for target epsilon " + fmt_double(target_eps));
    }
  }
  return bisect_decreasing(eps_of, target_eps, lo, hi);
}

double solve_delta_continuous(double target_eps, double tau, const BathParams& bath) {
  check_target(target_eps);
  check_tau(tau);
  if (target_eps <= reset_error_floor(tau, bath)) throw_below_floor(target_eps, tau, bath);

  auto eps_of = [&](double delta) { return linear_drive_p1(bath, delta, tau).p1(); };
  const double zero_jump = eps_of(0.0);
  if (target_eps >= zero_jump) {
    if (target_eps - zero_jump <= kSolveTol) return 0.0;
    throw InfeasibleTarget(InfeasibleTarget::Kind::above_zero_jump, target_eps, reset_error_floor(tau, bath),
                           minimal_reset_time(target_eps, bath),
                           "target epsilon " + fmt_double(target_eps) + " exceeds the zero-jump error " +
                               fmt_double(zero_jump) + " at tau " + fmt_double(tau) +
                               "; the linear drive alone already resets further");
  }

  double lo = 0.0;
  double hi = 1.0;
  while (eps_of(hi) >= target_eps) {
    lo = hi;
    hi *= 2.0;
    if (lo >= kMaxDelta) {
      throw InfeasibleTarget(InfeasibleTarget::Kind::below_floor, target_eps, reset_error_floor(tau, bath),
                             minimal_reset_time(target_eps, bath),
                             "target epsilon " + fmt_double(target_eps) + " needs a jump beyond delta = 1e4" +
                                 "; minimal reset time tau0 = " + fmt_double(minimal_reset_time(target_eps, bath)));
    }
  }
  return bisect_decreasing(eps_of, target_eps, lo, hi);
}

}  // namespace bitreset
