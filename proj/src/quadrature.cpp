#include "bitreset/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "bitreset/errors.hpp"

namespace bitreset {

namespace {

struct Panel {
  double a;
  double b;
  double value;
  double error;

  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel evaluate(const std::function<double(double)>& f, double a, double b) {
  using boost::math::quadrature::gauss;
  using boost::math::quadrature::gauss_kronrod;
  const double kronrod = gauss_kronrod<double, 15>::integrate(f, a, b, 0);
  const double gauss7 = gauss<double, 7>::integrate(f, a, b);
  return {a, b, kronrod, std::abs(kronrod - gauss7)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureOptions& options) {
  if (!(b >= a) || !std::isfinite(a) || !std::isfinite(b)) {
    throw InvalidArgument("integration bounds must be finite with a <= b");
  }
  if (a == b) return {0.0, 0.0, 0};

  const int panels = std::max(1, options.initial_panels);
  std::priority_queue<Panel> queue;
  double total_error = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + (b - a) * i / panels;
    const double hi = (i + 1 == panels) ? b : a + (b - a) * (i + 1) / panels;
    Panel p = evaluate(f, lo, hi);
    total_error += p.error;
    queue.push(p);
  }

  const int budget = options.max_bisections * panels;
  int bisections = 0;
  while (total_error > options.abs_tol && bisections < budget) {
    Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = evaluate(f, worst.a, mid);
    Panel right = evaluate(f, mid, worst.b);
    total_error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++bisections;
  }

  // Re-sum in position order so the result does not depend on heap layout.
  std::vector<Panel> done;
  done.reserve(queue.size());
  while (!queue.empty()) {
    done.push_back(queue.top());
    queue.pop();
  }
  std::sort(done.begin(), done.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  double value = 0.0;
  double error = 0.0;
  for (const Panel& p : done) {
    value += p.value;
    error += p.error;
  }
  if (error > options.abs_tol) {
    throw QuadratureError("quadrature did not converge: error estimate " + std::to_string(error) +
                          " exceeds tolerance after " + std::to_string(bisections) + " bisections");
  }
  return {value, error, bisections};
}

}  // namespace bitreset
