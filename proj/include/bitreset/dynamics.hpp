#pragma once

// Partial-swap thermalization dP1/dt = mu (gamma1(t) - P1) under a
// non-decreasing energy schedule E1(t) with E1(0-) = 0.

#include <span>
#include <variant>
#include <vector>

#include "bitreset/thermo.hpp"

namespace bitreset {

/// Instantaneous level change at frozen population.
struct Jump {
  double time;
  double level;
};

/// Linear E1(t) over [t_begin, t_end]; a hold when e_begin == e_end.
struct Ramp {
  double t_begin;
  double t_end;
  double e_begin;
  double e_end;
};

using Segment = std::variant<Jump, Ramp>;

/// Piecewise energy schedule on [0, tau], built left to right. Every append
/// checks that segments tile the time axis and that E1 never decreases.
class Schedule {
 public:
  Schedule() = default;

  Schedule& jump_to(double level);
  Schedule& ramp_to(double level, double duration);
  Schedule& hold(double duration);

  /// Jump to `level` at t = 0, then hold for `duration`.
  static Schedule constant(double level, double duration);
  /// N equal jumps of e_max/N, each followed by a hold of tau/N.
  static Schedule staircase(int n_steps, double e_max, double tau);
  /// E1(t) = (mu t + delta)/beta for 0 < t <= tau.
  static Schedule linear_drive(const BathParams& bath, double delta, double tau);

  std::span<const Segment> segments() const { return segments_; }
  double duration() const noexcept { return end_time_; }
  double final_level() const noexcept { return level_; }
  /// Right-continuous E1(t).
  double level_at(double t) const;
  /// E1(0+), the level right after every jump at t = 0.
  double level_after_start() const;

 private:
  std::vector<Segment> segments_;
  double end_time_ = 0.0;
  double level_ = 0.0;
};

/// Exact evolution over dt with gamma held constant:
/// P1 <- e^{-mu dt} P1 + (1 - e^{-mu dt}) gamma1.
TwoLevelState swap_step(TwoLevelState prev, TwoLevelState gamma, const BathParams& bath, double dt);

/// P1(t) from the integral solution
/// P1(t) = e^{-mu t} [P1(0) + mu int_0^t e^{mu s} gamma1(s) ds].
/// Constant pieces use swap_step; ramps use adaptive quadrature (abs tol 1e-10).
TwoLevelState swap_integral(TwoLevelState p0, const Schedule& schedule, const BathParams& bath, double t);

/// Closed-form P1(t) for the linear drive with initial jump delta/beta,
/// starting from the maximally mixed state.
TwoLevelState linear_drive_p1(const BathParams& bath, double delta, double t);

struct OraclePoint {
  double time;
  TwoLevelState state;
};

/// Fixed-step RK4 integration of the master equation; test oracle only.
/// Points are recorded after every step. Throws StepTooLarge when a
/// step-doubling estimate of the local error exceeds 1e-6.
std::vector<OraclePoint> ode_oracle(TwoLevelState p0, const Schedule& schedule, const BathParams& bath,
                                    double step);

/// Same, with step 1e-4 * min(1/mu, tau).
std::vector<OraclePoint> ode_oracle(TwoLevelState p0, const Schedule& schedule, const BathParams& bath);

}  // namespace bitreset
