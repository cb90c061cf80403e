#pragma once

// Equilibrium quantities of a two-level system with E0 fixed at 0.
// Entropic quantities are in nats, energies in the same units as 1/beta.

#include <cmath>

namespace bitreset {

/// Heat bath: inverse temperature beta and partial-swap rate mu.
class BathParams {
 public:
  BathParams(double beta, double mu);

  double beta() const noexcept { return beta_; }
  double mu() const noexcept { return mu_; }

 private:
  double beta_;
  double mu_;
};

/// Occupation (P0, P1) of the logical states; only P1 is stored.
class TwoLevelState {
 public:
  explicit TwoLevelState(double p1);

  double p1() const noexcept { return p1_; }
  double p0() const noexcept { return 1.0 - p1_; }

  static TwoLevelState maximally_mixed() { return TwoLevelState(0.5); }

 private:
  double p1_;
};

/// Energy of logical "1"; may be +inf.
class EnergyLevel {
 public:
  explicit EnergyLevel(double e1);

  double e1() const noexcept { return e1_; }

 private:
  double e1_;
};

/// ln(1 + e^x) without overflow.
inline double softplus(double x) {
  if (x > 30.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

/// gamma1 = 1/(1 + e^{beta e1}); saturates to 0 instead of overflowing.
TwoLevelState thermal_state(const BathParams& bath, EnergyLevel level);

/// KL divergence D[p||q] in nats with 0 ln 0 = 0.
/// Throws InfiniteDivergence when p has support outside q.
double relative_entropy(TwoLevelState p, TwoLevelState q);

/// D[p || gamma(level)] evaluated in log space, finite for every finite level.
double relative_entropy_to_thermal(TwoLevelState p, const BathParams& bath, EnergyLevel level);

/// W_qs(E_max) = (1/beta) ln[2 / (1 + e^{-beta E_max})].
double quasistatic_work(const BathParams& bath, double e_max);

}  // namespace bitreset
