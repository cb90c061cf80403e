#include "bitreset/bounds.hpp"

#include <cmath>
#include <numbers>

#include "bitreset/errors.hpp"

namespace bitreset {

namespace {

double gamma1(const BathParams& bath, double e1) { return thermal_state(bath, EnergyLevel(e1)).p1(); }

// D[gamma(a) || gamma(b)]
double thermal_divergence(const BathParams& bath, double e_a, double e_b) {
  return relative_entropy_to_thermal(thermal_state(bath, EnergyLevel(e_a)), bath, EnergyLevel(e_b));
}

}  // namespace

Verdict check(const BoundReport& report, double obs, double tol) {
  if (!report.value) return Verdict::not_applicable;
  const double v = *report.value;
  const double slack = tol * (1.0 + std::max(std::abs(v), std::abs(obs)));
  const bool ok = report.side == Side::lower ? v <= obs + slack : v >= obs - slack;
  return ok ? Verdict::holds : Verdict::violated;
}

double observed(const RunRecord& run, Quantity q, const BathParams& bath) {
  switch (q) {
    case Quantity::beta_work_penalty: return bath.beta() * run.w_pn;
    case Quantity::work_penalty: return run.w_pn;
    case Quantity::relative_entropy: return run.d_final;
    case Quantity::reset_error: return run.epsilon;
    case Quantity::e_max: return run.e_max;
  }
  return 0.0;
}

std::string_view to_string(Quantity q) {
  switch (q) {
    case Quantity::beta_work_penalty: return "beta*W_pn";
    case Quantity::work_penalty: return "W_pn";
    case Quantity::relative_entropy: return "D";
    case Quantity::reset_error: return "epsilon";
    case Quantity::e_max: return "e_max";
  }
  return "?";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::not_applicable: return "n/a";
    case Verdict::violated: return "VIOLATED";
  }
  return "?";
}

BoundReport penalty_lower_eq5(const RunRecord& run, const BathParams& bath) {
  BoundReport r{"lb_eq5", Side::lower, Quantity::beta_work_penalty, std::nullopt, {}};
  if (run.tau > 0.0) {
    const double gap = 1.0 - 2.0 * run.epsilon;
    r.value = run.d_final + gap * gap / (bath.mu() * run.tau);
  }
  return r;
}

BoundReport relent_lower_eq8(const RunRecord& run, const BathParams& bath, double e_max) {
  const double q = std::exp(-bath.mu() * run.tau);
  const double g1 = thermal_divergence(bath, 0.0, e_max);
  const double g2 = thermal_divergence(bath, e_max, 0.0);
  BoundReport r{"lb_eq8", Side::lower, Quantity::relative_entropy,
                std::max(q * q * g1 - q * (1.0 - q) * g2, 0.0), {}};
  const double beta = bath.beta();
  r.extras.emplace_back("G1", g1);
  r.extras.emplace_back("G2", g2);
  r.extras.emplace_back("G2_from_penalty", beta * (run.w_pn - run.epsilon * e_max));
  r.extras.emplace_back("G2_from_qs_work", beta * (quasistatic_work(bath, e_max) - run.epsilon * e_max));
  r.extras.emplace_back("G1_closed_form", 0.5 * std::log((1.0 + std::cosh(beta * e_max)) / 2.0));
  return r;
}

BoundReport relent_upper_eq10(const BathParams& bath, const DiscreteProtocol& proto) {
  const double decay = std::exp(-bath.mu() * proto.step_duration());
  const double gap = proto.e_max() / 2.0 - quasistatic_work(bath, proto.e_max());
  return {"ub_eq10", Side::upper, Quantity::relative_entropy, decay * bath.beta() * gap, {}};
}

double sigma_dominance_threshold(int n_steps, const BathParams& bath) {
  return n_steps * std::numbers::ln2 / (2.0 * bath.mu());
}

bool sigma_dominates_eq11(const DiscreteProtocol& proto, const BathParams& bath) {
  return proto.tau() >= sigma_dominance_threshold(proto.n_steps(), bath);
}

BoundReport penalty_lower_eq12(const DiscreteProtocol& proto, const BathParams& bath) {
  const double step = proto.step_energy();
  const double decay = std::exp(-bath.mu() * proto.step_duration());
  const double occupancy_gap = 0.5 - gamma1(bath, proto.e_max() - step);
  return {"lb_eq12", Side::lower, Quantity::work_penalty, decay * occupancy_gap * step, {}};
}

BoundReport penalty_upper_eq13(const DiscreteProtocol& proto, const BathParams& bath) {
  const double beta = bath.beta();
  const double step = proto.step_energy();
  const double decay = std::exp(-bath.mu() * proto.step_duration());
  const double value =
      std::expm1(beta * step) / (2.0 * beta) + decay * (proto.e_max() / 2.0 - quasistatic_work(bath, proto.e_max()));
  return {"ub_eq13", Side::upper, Quantity::work_penalty, value, {}};
}

BoundReport epsilon_lower_eq14(const DiscreteProtocol& proto, const BathParams& bath) {
  const double g = gamma1(bath, proto.e_max());
  const double decay = std::exp(-bath.mu() * proto.step_duration());
  const double value = g + decay * g * (1.0 - g) * -std::expm1(-bath.beta() * proto.step_energy());
  return {"eps_lb_eq14", Side::lower, Quantity::reset_error, value, {}};
}

EmaxSandwich emax_sandwich_eq15(double epsilon, int n_steps, const BathParams& bath) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw InvalidArgument("emax sandwich needs epsilon in (0, 1/2)");
  if (n_steps < 1) throw InvalidArgument("emax sandwich needs n_steps >= 1");
  const double beta = bath.beta();
  EmaxSandwich out{std::log((1.0 - epsilon) / epsilon) / beta, std::nullopt};
  const double half_root = std::pow(2.0 * epsilon, 1.0 / n_steps) / 2.0;
  const double denominator = epsilon - half_root;
  if (denominator > 0.0) {
    out.upper = std::log((1.0 - epsilon - half_root) / denominator) / beta;
  }
  return out;
}

BoundReport relent_upper_eq16(const RunRecord& run, const BathParams& bath, double e_max) {
  BoundReport r{"ub_eq16", Side::upper, Quantity::relative_entropy, std::nullopt, {}};
  const double tau_d = -std::log(run.epsilon) / bath.mu();
  r.extras.emplace_back("tau_D", tau_d);
  if (run.tau <= tau_d) {
    r.value = std::exp(-bath.mu() * run.tau) * softplus(bath.beta() * e_max);
  }
  return r;
}

BoundReport relent_upper_eq17(const RunRecord& run, const BathParams& bath, const Schedule& schedule) {
  const double q = std::exp(-bath.mu() * run.tau);
  const double e_final = schedule.final_level();
  const double value = q * thermal_divergence(bath, 0.0, e_final) +
                       (1.0 - q) * thermal_divergence(bath, schedule.level_after_start(), e_final);
  return {"ub_eq17", Side::upper, Quantity::relative_entropy, value, {}};
}

std::vector<BoundReport> discrete_bounds(const RunRecord& run, const DiscreteProtocol& proto,
                                         const BathParams& bath) {
  return {penalty_lower_eq5(run, bath),
          relent_lower_eq8(run, bath, proto.e_max()),
          relent_upper_eq10(bath, proto),
          penalty_lower_eq12(proto, bath),
          penalty_upper_eq13(proto, bath),
          epsilon_lower_eq14(proto, bath),
          relent_upper_eq16(run, bath, proto.e_max()),
          relent_upper_eq17(run, bath, proto.schedule())};
}

std::vector<BoundReport> continuous_bounds(const RunRecord& run, const ContinuousProtocol& proto,
                                           const BathParams& bath) {
  return {penalty_lower_eq5(run, bath), relent_lower_eq8(run, bath, proto.e_max(bath)),
          relent_upper_eq16(run, bath, proto.e_max(bath)), relent_upper_eq17(run, bath, proto.schedule(bath))};
}

}  // namespace bitreset
