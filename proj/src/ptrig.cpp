#include "pleig/ptrig.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

#include <cmath>
#include <numbers>
#include <string>

#include "pleig/errors.hpp"

namespace pleig {

PExponent::PExponent(double p) : p_(p) {
  if (!std::isfinite(p) || !(p > 1.0)) {
    throw DomainError("exponent p must be finite and > 1, got " + std::to_string(p));
  }
}

double pi_p(PExponent p) {
  using std::numbers::pi;
  const double pv = p.value();
  // sin(pi/p) = sin(pi*(p-1)/p). Pick the argument in (0, 1/2] so that it
  // carries full relative precision; p - 1 is exact for p < 2.
  const double s = boost::math::sin_pi(pv < 2.0 ? (pv - 1.0) / pv : 1.0 / pv);
  return 2.0 * pi * std::pow(pv - 1.0, 1.0 / pv) / (pv * s);
}

namespace detail {

ChebyshevSeries::ChebyshevSeries(double lo, double hi, Eigen::VectorXd coeffs)
    : lo_(lo), hi_(hi), coeffs_(std::move(coeffs)) {}

template <class F>
ChebyshevSeries ChebyshevSeries::fit(const F& f, double lo, double hi, int degree) {
  using std::numbers::pi;
  const int n = degree + 1;
  Eigen::VectorXd values(n);
  for (int j = 0; j < n; ++j) {
    const double u = std::cos(pi * (j + 0.5) / n);
    values[j] = f(0.5 * (hi + lo) + 0.5 * (hi - lo) * u);
  }
  Eigen::VectorXd coeffs(n);
  for (int m = 0; m < n; ++m) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) sum += values[j] * std::cos(pi * m * (j + 0.5) / n);
    coeffs[m] = 2.0 * sum / n;
  }
  coeffs[0] *= 0.5;

  // Drop the tail that sits below double resolution.
  Eigen::Index used = n;
  const double floor = 1e-18 * std::abs(coeffs[0]);
  while (used > 1 && std::abs(coeffs[used - 1]) < floor) --used;
  return ChebyshevSeries(lo, hi, coeffs.head(used));
}

double ChebyshevSeries::operator()(double x) const {
  const double u = (2.0 * x - lo_ - hi_) / (hi_ - lo_);
  const double two_u = 2.0 * u;
  double b1 = 0.0;
  double b2 = 0.0;
  for (Eigen::Index m = coeffs_.size() - 1; m >= 1; --m) {
    const double b0 = coeffs_[m] + two_u * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return coeffs_[0] + u * b1 - b2;
}

}  // namespace detail

namespace {

constexpr int kSeriesDegree = 64;

}  // namespace

PTrigTable::PTrigTable(PExponent p)
    : p_(p),
      pi_p_(pleig::pi_p(p)),
      half_pi_p_(0.5 * pi_p_),
      amplitude_(std::pow(p.value() - 1.0, 1.0 / p.value())) {
  const double pv = p.value();
  const double a = 1.0 / pv;
  const double b = 1.0 - a;

  // Lower half, x in [0, 1/2]: sin_pow = z * H(z), z = x^p.
  const double z_lower = std::pow(0.5, pv);
  lower_ = detail::ChebyshevSeries::fit(
      [&](double z) {
        const double x = std::pow(z, a);
        return boost::math::ibeta_inv(a, b, x) / z;
      },
      0.0, z_lower, kSeriesDegree);

  // Upper half, x in [1/2, 1]: cos_pow = z * H(z), z = (1-x)^{p/(p-1)}.
  const double z_upper = std::pow(0.5, 1.0 / b);
  upper_ = detail::ChebyshevSeries::fit(
      [&](double z) {
        const double one_minus_x = std::pow(z, b);
        return boost::math::ibeta_inv(b, a, one_minus_x) / z;
      },
      0.0, z_upper, kSeriesDegree);
}

PTrigPoint PTrigTable::eval(double theta) const {
  const double pv = p_.value();
  double phi = std::fmod(theta, 2.0 * pi_p_);
  if (phi < 0.0) phi += 2.0 * pi_p_;

  double sign_sin = 1.0;
  if (phi >= pi_p_) {
    phi -= pi_p_;
    sign_sin = -1.0;
  }
  double sign_cos = sign_sin;
  if (phi > half_pi_p_) {
    phi = pi_p_ - phi;
    sign_cos = -sign_cos;
  }
  const double x = phi / half_pi_p_;

  PTrigPoint out{};
  if (x <= 0.5) {
    const double z = std::pow(x, pv);
    const double h = lower_(z);
    out.sin_pow = z * h;
    out.cos_pow = 1.0 - out.sin_pow;
    out.sin = x * std::pow((pv - 1.0) * h, 1.0 / pv);
    out.cos = std::pow(out.cos_pow, 1.0 / pv);
  } else {
    const double w = 1.0 - x;
    const double z = std::pow(w, pv / (pv - 1.0));
    const double h = upper_(z);
    out.cos_pow = z * h;
    out.sin_pow = 1.0 - out.cos_pow;
    out.cos = std::pow(w, 1.0 / (pv - 1.0)) * std::pow(h, 1.0 / pv);
    out.sin = amplitude_ * std::pow(out.sin_pow, 1.0 / pv);
  }
  out.sin *= sign_sin;
  out.cos *= sign_cos;
  return out;
}

double sin_p(const PTrigTable& table, double theta) { return table.eval(theta).sin; }

double sin_p(PExponent p, double theta) { return PTrigTable(p).eval(theta).sin; }

double prufer_rhs(const PTrigTable& table, double theta, double lambda_q, double scale) {
  if (!(lambda_q >= 0.0)) {
    throw DomainError("prufer_rhs: lambda*q must be non-negative");
  }
  if (!(scale > 0.0)) {
    throw DomainError("prufer_rhs: scale must be positive");
  }
  const PTrigPoint pt = table.eval(theta);
  return scale * pt.cos_pow + lambda_q * pt.sin_pow / std::pow(scale, table.p().value() - 1.0);
}

}  // namespace pleig
