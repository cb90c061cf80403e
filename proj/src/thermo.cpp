#include "bitreset/thermo.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "bitreset/errors.hpp"

namespace bitreset {

namespace {

// p ln p with 0 ln 0 = 0; q_log is ln q.
double kl_term(double p, double p_log, double q_log) {
  if (p == 0.0) return 0.0;
  return p * (p_log - q_log);
}

}  // namespace

BathParams::BathParams(double beta, double mu) : beta_(beta), mu_(mu) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw InvalidArgument("beta must be finite and > 0, got " + std::to_string(beta));
  }
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw InvalidArgument("mu must be finite and > 0, got " + std::to_string(mu));
  }
}

TwoLevelState::TwoLevelState(double p1) : p1_(p1) {
  if (!(p1 >= 0.0 && p1 <= 1.0)) {
    throw InvalidArgument("probability p1 must lie in [0, 1], got " + std::to_string(p1));
  }
}

EnergyLevel::EnergyLevel(double e1) : e1_(e1) {
  if (!(e1 >= 0.0)) {
    throw InvalidArgument("energy level must be >= 0, got " + std::to_string(e1));
  }
}

TwoLevelState thermal_state(const BathParams& bath, EnergyLevel level) {
  const double x = bath.beta() * level.e1();
  const double w = std::exp(-x);  // underflows to 0 for huge x
  return TwoLevelState(w / (1.0 + w));
}

double relative_entropy(TwoLevelState p, TwoLevelState q) {
  if ((p.p1() > 0.0 && q.p1() == 0.0) || (p.p0() > 0.0 && q.p1() == 1.0)) {
    throw InfiniteDivergence("relative entropy diverges: p has support where q has none");
  }
  const double d1 = p.p1() > 0.0 ? kl_term(p.p1(), std::log(p.p1()), std::log(q.p1())) : 0.0;
  const double d0 = p.p1() < 1.0 ? kl_term(p.p0(), std::log1p(-p.p1()), std::log1p(-q.p1())) : 0.0;
  return std::max(0.0, d0 + d1);
}

double relative_entropy_to_thermal(TwoLevelState p, const BathParams& bath, EnergyLevel level) {
  const double x = bath.beta() * level.e1();
  if (std::isinf(x)) {
    if (p.p1() > 0.0) throw InfiniteDivergence("relative entropy diverges at infinite energy gap");
    return 0.0;
  }
  // ln gamma1 = -softplus(x), ln gamma0 = -softplus(-x)
  const double d1 = p.p1() > 0.0 ? kl_term(p.p1(), std::log(p.p1()), -softplus(x)) : 0.0;
  const double d0 = p.p1() < 1.0 ? kl_term(p.p0(), std::log1p(-p.p1()), -std::log1p(std::exp(-x))) : 0.0;
  return std::max(0.0, d0 + d1);
}

double quasistatic_work(const BathParams& bath, double e_max) {
  if (!(e_max >= 0.0)) {
    throw InvalidArgument("e_max must be >= 0, got " + std::to_string(e_max));
  }
  return (std::numbers::ln2 - std::log1p(std::exp(-bath.beta() * e_max))) / bath.beta();
}

}  // namespace bitreset
