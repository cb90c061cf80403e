#pragma once

// Analytic inequalities on the work penalty, the final relative entropy,
// the reset error and the required E_max, evaluated as first-class reports.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bitreset/dynamics.hpp"
#include "bitreset/protocols.hpp"
#include "bitreset/thermo.hpp"

namespace bitreset {

enum class Side { lower, upper };

/// Quantity a bound constrains, with its unit.
enum class Quantity {
  beta_work_penalty,  // nats
  work_penalty,       // energy
  relative_entropy,   // nats, D[P(tau) || gamma(tau)]
  reset_error,        // probability
  e_max,              // energy
};

enum class Verdict { holds, not_applicable, violated };

struct BoundReport {
  std::string name;
  Side side;
  Quantity target;
  /// Empty when the bound's preconditions are not met.
  std::optional<double> value;
  /// Side values worth logging next to the bound (e.g. alternative closed forms).
  std::vector<std::pair<std::string, double>> extras;

  bool applicable() const noexcept { return value.has_value(); }
};

/// Absolute + relative slack used when comparing a bound with a simulated value.
inline constexpr double kBoundTolerance = 1e-12;

Verdict check(const BoundReport& report, double observed, double tol = kBoundTolerance);

/// Observed value of `q` in a run (beta needed for beta_work_penalty).
double observed(const RunRecord& run, Quantity q, const BathParams& bath);

std::string_view to_string(Quantity q);
std::string_view to_string(Verdict v);

/// beta W_pn >= D + (1 - 2 eps)^2 / (mu tau); not applicable at tau = 0.
BoundReport penalty_lower_eq5(const RunRecord& run, const BathParams& bath);

/// D >= max{q^2 G1 - q(1-q) G2, 0} with q = e^{-mu tau}, G1 = D[gamma(0)||gamma(tau)],
/// G2 = D[gamma(tau)||gamma(0)]. Two alternative G2 forms ride along in extras.
BoundReport relent_lower_eq8(const RunRecord& run, const BathParams& bath, double e_max);

/// D <= e^{-mu tau/N} beta [E_max/2 - W_qs(E_max)].
BoundReport relent_upper_eq10(const BathParams& bath, const DiscreteProtocol& proto);

/// tau >= N ln2 / (2 mu): sufficient for D <= Sigma.
bool sigma_dominates_eq11(const DiscreteProtocol& proto, const BathParams& bath);
double sigma_dominance_threshold(int n_steps, const BathParams& bath);

/// W_pn >= e^{-mu tau/N} [1/2 - 1/(1 + e^{beta(E_max - step)})] step.
BoundReport penalty_lower_eq12(const DiscreteProtocol& proto, const BathParams& bath);

/// W_pn <= (e^{beta step} - 1)/(2 beta) + e^{-mu tau/N} [E_max/2 - W_qs].
BoundReport penalty_upper_eq13(const DiscreteProtocol& proto, const BathParams& bath);

/// eps >= g + e^{-mu tau/N} g (1 - g)(1 - e^{-beta step}), g = gamma1(E_max).
BoundReport epsilon_lower_eq14(const DiscreteProtocol& proto, const BathParams& bath);

struct EmaxSandwich {
  double lower;                 // energy
  std::optional<double> upper;  // energy; empty when eps - (2 eps)^{1/N}/2 <= 0
};

/// ln((1-eps)/eps) <= beta E_max <= ln((1 - eps - s/2)/(eps - s/2)), s = (2 eps)^{1/N}.
EmaxSandwich emax_sandwich_eq15(double epsilon, int n_steps, const BathParams& bath);

/// D <= e^{-mu tau} ln(1 + e^{beta E_max}), applicable for tau <= ln(1/eps)/mu.
BoundReport relent_upper_eq16(const RunRecord& run, const BathParams& bath, double e_max);

/// D <= e^{-mu tau} D[gamma(0)||gamma(tau)] + (1 - e^{-mu tau}) D[gamma(0+)||gamma(tau)].
BoundReport relent_upper_eq17(const RunRecord& run, const BathParams& bath, const Schedule& schedule);

/// Every bound that applies to a discrete run, in a fixed order.
std::vector<BoundReport> discrete_bounds(const RunRecord& run, const DiscreteProtocol& proto,
                                         const BathParams& bath);
/// Every bound that applies to a continuous run, in a fixed order.
std::vector<BoundReport> continuous_bounds(const RunRecord& run, const ContinuousProtocol& proto,
                                           const BathParams& bath);

}  // namespace bitreset
