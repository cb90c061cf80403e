#pragma once

#include <string>
#include <vector>

#include "bitreset/thermo.hpp"

namespace bitreset {

struct Violation {
  std::string check;
  std::string context;  // protocol and bath that produced it
  double bound;
  double observed;
};

struct VerificationReport {
  int checks = 0;
  int not_applicable = 0;
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
};

struct VerifyOptions {
  int n_steps = 10;
  BathParams bath{1.0, 0.1};
};

/// Runs every invariant and applicable bound over the built-in grid:
/// discrete runs over E_max in [0.5, 8] x tau in {0} U [0.1, 200] (log),
/// continuous runs over delta in {0, 0.5, 1, 3} x tau in [0.1, 50] (log),
/// and fixed-error solves with their feasibility boundary.
VerificationReport verify_all(const VerifyOptions& options = {});

}  // namespace bitreset
