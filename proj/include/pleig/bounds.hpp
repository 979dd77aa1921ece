#pragma once

#include "pleig/ptrig.hpp"
#include "pleig/weight.hpp"

namespace pleig {

/// Two-sided bound (k*pi_p/q_plus)^p <= lambda_k <= (k*pi_p/q_minus)^p with
/// q_minus = int_0^1 min{1,q}, q_plus = int_0^1 max{1,q}.
struct ZhangBracket {
  double q_minus;
  double q_plus;
  int k;
  double lower;
  double upper;

  double width() const noexcept { return upper - lower; }
  bool contains(double lambda) const noexcept { return lower <= lambda && lambda <= upper; }
};

/// Exact, from the kink and the closed-form antiderivative.
double q_bar_minus(const WeightProfile& w);
double q_bar_plus(const WeightProfile& w);

/// Same integrals by adaptive quadrature split at the kink.
double q_bar_minus_quadrature(const WeightProfile& w, double abs_tol = 1e-12);
double q_bar_plus_quadrature(const WeightProfile& w, double abs_tol = 1e-12);
/// int_a^b q by adaptive quadrature; independent of antiderivative().
double weight_integral_quadrature(const WeightProfile& w, double a, double b,
                                  double abs_tol = 1e-12);

/// Throws DomainError for k < 1 or when table and weight disagree on p.
ZhangBracket zhang_bracket(const WeightProfile& w, int k, const PTrigTable& table);

}  // namespace pleig
