#pragma once

#include <functional>

namespace bitreset {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  /// Bisections allowed per initial panel.
  int max_bisections = 60;
  /// The interval is first cut into this many equal panels.
  int initial_panels = 1;
};

struct QuadratureResult {
  double value;
  double error_estimate;
  int bisections;
};

/// Globally adaptive Gauss-Kronrod (G7/K15) quadrature: the panel with the
/// largest |K15 - G7| is bisected until the summed estimate meets abs_tol.
/// Throws QuadratureError when the bisection budget runs out first.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureOptions& options = {});

}  // namespace bitreset
