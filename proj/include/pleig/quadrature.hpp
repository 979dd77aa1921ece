#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <span>
#include <vector>

#include "pleig/errors.hpp"

namespace pleig {

/// Adaptive 31-point Gauss-Kronrod quadrature of f over [a, b], split at
/// every breakpoint inside (a, b) so that each piece is smooth. Throws
/// NumericalError when the summed error estimate exceeds abs_tol.
template <class F>
double integrate_piecewise(const F& f, double a, double b, double abs_tol,
                           std::span<const double> breakpoints = {}) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
  // Deeper recursion does not help: on steep profiles the summed error
  // estimate is dominated by rounding in each leaf and grows with depth.
  constexpr unsigned kMaxDepth = 10;
  constexpr double kMinRelTol = 1e-13;

  std::vector<double> cuts{a};
  for (double c : breakpoints) {
    if (c > a && c < b) cuts.push_back(c);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());

  double total = 0.0;
  double total_error = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    double error = 0.0;
    double l1 = 0.0;
    // Boost's tolerance is relative to the L1 norm of the piece, so a single
    // unrefined pass estimates that norm first.
    Rule::integrate(f, cuts[i], cuts[i + 1], 0, 0.0, &error, &l1);
    const double rel_tol =
        l1 > 0.0 ? std::max(abs_tol / l1, kMinRelTol) : abs_tol;
    total += Rule::integrate(f, cuts[i], cuts[i + 1], kMaxDepth, rel_tol, &error, &l1);
    total_error += error;
  }
  if (!(total_error <= abs_tol)) {
    char msg[96];
    std::snprintf(msg, sizeof msg, "quadrature error estimate %.3g exceeds tolerance %.3g",
                  total_error, abs_tol);
    throw NumericalError(msg);
  }
  return total;
}

}  // namespace pleig
