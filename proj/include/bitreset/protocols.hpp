#pragma once

#include <vector>

#include "bitreset/dynamics.hpp"
#include "bitreset/thermo.hpp"

namespace bitreset {

/// N equal jumps of e_max/N, each followed by thermalization for tau/N.
class DiscreteProtocol {
 public:
  DiscreteProtocol(int n_steps, double e_max, double tau);

  int n_steps() const noexcept { return n_steps_; }
  double e_max() const noexcept { return e_max_; }
  double tau() const noexcept { return tau_; }
  double step_energy() const noexcept { return e_max_ / n_steps_; }
  double step_duration() const noexcept { return tau_ / n_steps_; }
  /// Level during step k (1-based): k e_max / N.
  double level(int k) const noexcept { return e_max_ * k / n_steps_; }

  Schedule schedule() const { return Schedule::staircase(n_steps_, e_max_, tau_); }

 private:
  int n_steps_;
  double e_max_;
  double tau_;
};

/// Jump to delta/beta at t = 0, then E1 rises with slope mu/beta until tau.
class ContinuousProtocol {
 public:
  ContinuousProtocol(double delta, double tau);

  double delta() const noexcept { return delta_; }
  double tau() const noexcept { return tau_; }
  double e_max(const BathParams& bath) const { return (bath.mu() * tau_ + delta_) / bath.beta(); }

  Schedule schedule(const BathParams& bath) const { return Schedule::linear_drive(bath, delta_, tau_); }

 private:
  double delta_;
  double tau_;
};

struct TrajectoryPoint {
  double time;
  double e1;
  double p1;
  double gamma1;
};

/// Everything one protocol execution produces. Entropies in nats, work in energy units.
struct RunRecord {
  std::vector<TrajectoryPoint> trajectory;
  double tau = 0.0;
  double e_max = 0.0;
  double work = 0.0;
  double w_qs = 0.0;
  double w_pn = 0.0;
  double d_final = 0.0;
  double sigma = 0.0;
  double epsilon = 0.5;
  /// Per-step entropy production and relative-entropy change (discrete runs only).
  std::vector<double> step_sigma;
  std::vector<double> step_d;
};

RunRecord run_discrete(const DiscreteProtocol& proto, const BathParams& bath);
RunRecord run_continuous(const ContinuousProtocol& proto, const BathParams& bath);

/// ln(1/(2 epsilon))/mu: no protocol reaches error epsilon in less time.
double minimal_reset_time(double epsilon, const BathParams& bath);

/// e^{-mu tau}/2, the reset error as the drive goes to infinity.
double reset_error_floor(double tau, const BathParams& bath);

/// E_max such that run_discrete reaches target_eps (within 1e-10).
/// Throws InfeasibleTarget when target_eps <= e^{-mu tau}/2.
double solve_emax_discrete(double target_eps, int n_steps, double tau, const BathParams& bath);

/// Jump delta such that linear_drive_p1(tau) = target_eps (within 1e-10).
/// Throws InfeasibleTarget below the floor, above the zero-jump value, or when delta would exceed 1e4.
double solve_delta_continuous(double target_eps, double tau, const BathParams& bath);

}  // namespace bitreset
