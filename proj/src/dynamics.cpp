#include "bitreset/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bitreset/errors.hpp"
#include "bitreset/quadrature.hpp"

namespace bitreset {

namespace {

constexpr double kRampAbsTol = 1e-10;
constexpr double kOracleLocalTol = 1e-6;
// Weight e^{-50} is far below every tolerance used here.
constexpr double kMemoryHorizon = 50.0;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double gamma1_at(const BathParams& bath, double e1) { return thermal_state(bath, EnergyLevel(e1)).p1(); }

double ramp_level(const Ramp& r, double t) {
  if (r.t_end <= r.t_begin) return r.e_end;
  const double frac = std::clamp((t - r.t_begin) / (r.t_end - r.t_begin), 0.0, 1.0);
  return r.e_begin + (r.e_end - r.e_begin) * frac;
}

// P1 at `t_stop` inside a sloped ramp, given P1 at the ramp start.
double evolve_ramp(double p1, const Ramp& r, const BathParams& bath, double t_stop) {
  const double mu = bath.mu();
  const double length = t_stop - r.t_begin;
  const double lo = std::max(r.t_begin, t_stop - kMemoryHorizon / mu);
  auto integrand = [&](double s) { return mu * std::exp(-mu * (t_stop - s)) * gamma1_at(bath, ramp_level(r, s)); };
  QuadratureOptions opts;
  opts.abs_tol = kRampAbsTol;
  const double source = integrate_adaptive(integrand, lo, t_stop, opts).value;
  return std::exp(-mu * length) * p1 + source;
}

double rhs(const BathParams& bath, const Ramp& r, double t, double p1) {
  return bath.mu() * (gamma1_at(bath, ramp_level(r, t)) - p1);
}

double rk4(const BathParams& bath, const Ramp& r, double t, double p1, double h) {
  const double k1 = rhs(bath, r, t, p1);
  const double k2 = rhs(bath, r, t + 0.5 * h, p1 + 0.5 * h * k1);
  const double k3 = rhs(bath, r, t + 0.5 * h, p1 + 0.5 * h * k2);
  const double k4 = rhs(bath, r, t + h, p1 + h * k3);
  return p1 + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

Schedule& Schedule::jump_to(double level) {
  if (!(level >= level_)) {
    throw InvalidArgument("schedule must be non-decreasing: jump to " + std::to_string(level) + " from " +
                          std::to_string(level_));
  }
  segments_.push_back(Jump{end_time_, level});
  level_ = level;
  return *this;
}

Schedule& Schedule::ramp_to(double level, double duration) {
  if (!(duration >= 0.0)) throw InvalidArgument("ramp duration must be >= 0");
  if (!(level >= level_)) {
    throw InvalidArgument("schedule must be non-decreasing: ramp to " + std::to_string(level) + " from " +
                          std::to_string(level_));
  }
  segments_.push_back(Ramp{end_time_, end_time_ + duration, level_, level});
  end_time_ += duration;
  level_ = level;
  return *this;
}

Schedule& Schedule::hold(double duration) { return ramp_to(level_, duration); }

Schedule Schedule::constant(double level, double duration) {
  Schedule s;
  s.jump_to(level).hold(duration);
  return s;
}

Schedule Schedule::staircase(int n_steps, double e_max, double tau) {
  if (n_steps < 1) throw InvalidArgument("staircase needs at least one step");
  Schedule s;
  for (int k = 1; k <= n_steps; ++k) {
    s.jump_to(e_max * k / n_steps).hold(tau / n_steps);
  }
  return s;
}

Schedule Schedule::linear_drive(const BathParams& bath, double delta, double tau) {
  if (!(delta >= 0.0)) throw InvalidArgument("delta must be >= 0");
  Schedule s;
  s.jump_to(delta / bath.beta()).ramp_to((bath.mu() * tau + delta) / bath.beta(), tau);
  return s;
}

double Schedule::level_at(double t) const {
  double level = 0.0;
  for (const Segment& seg : segments_) {
    const bool past = std::visit(overloaded{[&](const Jump& j) {
                                              if (j.time > t) return true;
                                              level = j.level;
                                              return false;
                                            },
                                            [&](const Ramp& r) {
                                              if (r.t_begin > t) return true;
                                              level = ramp_level(r, t);
                                              return false;
                                            }},
                                 seg);
    if (past) break;
  }
  return level;
}

double Schedule::level_after_start() const {
  double level = 0.0;
  for (const Segment& seg : segments_) {
    const Jump* j = std::get_if<Jump>(&seg);
    if (j == nullptr) {
      if (std::get<Ramp>(seg).t_end > 0.0) break;
      continue;
    }
    if (j->time > 0.0) break;
    level = j->level;
  }
  return level;
}

TwoLevelState swap_step(TwoLevelState prev, TwoLevelState gamma, const BathParams& bath, double dt) {
  if (!(dt >= 0.0)) throw InvalidArgument("swap_step needs dt >= 0");
  const double x = bath.mu() * dt;
  const double keep = std::exp(-x);
  const double mix = -std::expm1(-x);
  const double p1 = keep * prev.p1() + mix * gamma.p1();
  // stays inside [min, max] of the two endpoints
  return TwoLevelState(std::clamp(p1, std::min(prev.p1(), gamma.p1()), std::max(prev.p1(), gamma.p1())));
}

TwoLevelState swap_integral(TwoLevelState p0, const Schedule& schedule, const BathParams& bath, double t) {
  if (!(t >= 0.0) || t > schedule.duration()) {
    throw InvalidArgument("swap_integral needs 0 <= t <= schedule duration");
  }
  double p1 = p0.p1();
  for (const Segment& seg : schedule.segments()) {
    const Ramp* r = std::get_if<Ramp>(&seg);
    if (r == nullptr || r->t_begin >= t) continue;
    const double stop = std::min(r->t_end, t);
    if (r->e_begin == r->e_end) {
      p1 = swap_step(TwoLevelState(p1), thermal_state(bath, EnergyLevel(r->e_begin)), bath, stop - r->t_begin).p1();
    } else {
      p1 = std::clamp(evolve_ramp(p1, *r, bath, stop), 0.0, 1.0);
    }
  }
  return TwoLevelState(p1);
}

TwoLevelState linear_drive_p1(const BathParams& bath, double delta, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("linear_drive_p1 needs t >= 0");
  if (!(delta >= 0.0)) throw InvalidArgument("linear_drive_p1 needs delta >= 0");
  const double mt = bath.mu() * t;
  // ln[(1 + e^{mt+delta}) / (1 + e^{delta})] = mt + ln(1+e^{-(mt+delta)}) - ln(1+e^{-delta})
  const double log_ratio = mt + std::log1p(std::exp(-(mt + delta))) - std::log1p(std::exp(-delta));
  const double p1 = std::exp(-mt) * (0.5 + std::exp(-delta) * log_ratio);
  return TwoLevelState(std::clamp(p1, 0.0, 0.5));
}

std::vector<OraclePoint> ode_oracle(TwoLevelState p0, const Schedule& schedule, const BathParams& bath,
                                    double step) {
  if (!(step > 0.0)) throw InvalidArgument("ode_oracle needs step > 0");
  std::vector<OraclePoint> out{{0.0, p0}};
  double p1 = p0.p1();
  for (const Segment& seg : schedule.segments()) {
    const Ramp* r = std::get_if<Ramp>(&seg);
    if (r == nullptr) continue;
    const double length = r->t_end - r->t_begin;
    if (length <= 0.0) continue;
    const auto n = static_cast<long long>(std::ceil(length / step - 1e-9));
    const double h = length / static_cast<double>(n);
    for (long long i = 0; i < n; ++i) {
      const double t = r->t_begin + h * static_cast<double>(i);
      const double next = rk4(bath, *r, t, p1, h);
      if (i % 1024 == 0) {
        const double half = rk4(bath, *r, t + 0.5 * h, rk4(bath, *r, t, p1, 0.5 * h), 0.5 * h);
        if (std::abs(next - half) * 16.0 / 15.0 > kOracleLocalTol) {
          throw StepTooLarge("ode_oracle: local truncation estimate exceeds 1e-6; reduce the step");
        }
      }
      p1 = std::clamp(next, 0.0, 1.0);
      out.push_back({i + 1 == n ? r->t_end : t + h, TwoLevelState(p1)});
    }
  }
  return out;
}

std::vector<OraclePoint> ode_oracle(TwoLevelState p0, const Schedule& schedule, const BathParams& bath) {
  const double scale = std::min(1.0 / bath.mu(), schedule.duration());
  if (scale <= 0.0) return {{0.0, p0}};
  return ode_oracle(p0, schedule, bath, 1e-4 * scale);
}

}  // namespace bitreset
