#pragma once

#include <Eigen/Core>

namespace pleig {

/// Exponent p of the p-Laplacian. Always p > 1 and finite.
class PExponent {
 public:
  explicit PExponent(double p);

  double value() const noexcept { return p_; }
  operator double() const noexcept { return p_; }

 private:
  double p_;
};

/// Half period 2*pi*(p-1)^(1/p) / (p*sin(pi/p)). The k-th Dirichlet
/// eigenvalue of (|v'|^{p-2}v')' + lambda |v|^{p-2} v = 0 on (0,1) is
/// (k*pi_p)^p.
double pi_p(PExponent p);

/// Normalization of the generalized sine.
enum class SinPConvention {
  /// S solves (|S'|^{p-2}S')' + |S|^{p-2}S = 0, S(0) = 0, S'(0) = 1.
  /// First integral: (p-1)|S'|^p + |S|^p = p-1, so max S = (p-1)^(1/p)
  /// and the first positive zero is pi_p.
  kUnitRate,
};

/// sin_p and cos_p = d/dtheta sin_p at one angle, together with the two
/// powers the Pruefer rate needs. sin_pow + cos_pow == 1.
struct PTrigPoint {
  double sin;
  double cos;
  double sin_pow;  ///< |sin|^p / (p-1)
  double cos_pow;  ///< |cos|^p
};

namespace detail {

/// Chebyshev series on [lo, hi], evaluated with Clenshaw's recurrence.
class ChebyshevSeries {
 public:
  ChebyshevSeries() = default;
  ChebyshevSeries(double lo, double hi, Eigen::VectorXd coeffs);

  template <class F>
  static ChebyshevSeries fit(const F& f, double lo, double hi, int degree);

  double operator()(double x) const;
  const Eigen::VectorXd& coefficients() const { return coeffs_; }

 private:
  double lo_ = 0.0;
  double hi_ = 1.0;
  Eigen::VectorXd coeffs_;
};

}  // namespace detail

/// Tabulated generalized trigonometric functions for one exponent.
///
/// On a quarter period the identity sin_pow(theta) = I^{-1}(x; 1/p, 1-1/p),
/// x = theta / (pi_p/2), ties sin_p to the inverse regularized incomplete
/// beta function. The inverse is smooth in z = x^p near x = 0 and in
/// z = (1-x)^{p/(p-1)} near x = 1, so each half of the quarter period is
/// stored as a Chebyshev series in its own z. Everything else follows from
/// oddness, reflection about pi_p/2 and 2*pi_p periodicity.
///
/// Immutable after construction; safe to share between threads.
class PTrigTable {
 public:
  explicit PTrigTable(PExponent p);

  PExponent p() const noexcept { return p_; }
  double pi_p() const noexcept { return pi_p_; }
  SinPConvention convention() const noexcept { return SinPConvention::kUnitRate; }

  PTrigPoint eval(double theta) const;

  const detail::ChebyshevSeries& lower_series() const { return lower_; }
  const detail::ChebyshevSeries& upper_series() const { return upper_; }

 private:
  PExponent p_;
  double pi_p_;
  double half_pi_p_;
  double amplitude_;  // (p-1)^(1/p)
  detail::ChebyshevSeries lower_;
  detail::ChebyshevSeries upper_;
};

double sin_p(const PTrigTable& table, double theta);
/// Convenience overload; builds a table on every call.
double sin_p(PExponent p, double theta);

/// Rate d(theta)/dt of the scaled Pruefer angle for
/// (|v'|^{p-2}v')' + lambda_q(t) |v|^{p-2} v = 0, where
///   v = rho * sin_p(theta),  v' = rho * scale * cos_p(theta).
///
/// rate = scale * cos_pow + lambda_q * sin_pow / scale^{p-1}.
/// With scale = lambda^(1/p) and lambda_q = lambda * q this is
/// scale * (1 + (q - 1) * sin_pow); for q == 1 it is constant.
/// The rate equals scale at every zero of sin_p.
double prufer_rhs(const PTrigTable& table, double theta, double lambda_q, double scale);

}  // namespace pleig
