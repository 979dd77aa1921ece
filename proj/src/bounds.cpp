#include "pleig/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>

#include "pleig/errors.hpp"
#include "pleig/quadrature.hpp"

namespace pleig {

double q_bar_minus(const WeightProfile& w) {
  if (const auto t = w.kink()) return w.antiderivative(*t) + (1.0 - *t);
  if (w.q0() >= 1.0) return 1.0;
  return w.antiderivative(1.0);
}

double q_bar_plus(const WeightProfile& w) {
  if (const auto t = w.kink()) return *t + (w.antiderivative(1.0) - w.antiderivative(*t));
  if (w.q1() <= 1.0) return 1.0;
  return w.antiderivative(1.0);
}

namespace {

std::span<const double> kink_breakpoints(const WeightProfile& w, std::array<double, 1>& storage) {
  if (const auto t = w.kink()) {
    storage[0] = *t;
    return storage;
  }
  return {};
}

}  // namespace

double q_bar_minus_quadrature(const WeightProfile& w, double abs_tol) {
  std::array<double, 1> cut{};
  return integrate_piecewise([&](double t) { return std::min(1.0, w.value(t)); }, 0.0, 1.0,
                             abs_tol, kink_breakpoints(w, cut));
}

double q_bar_plus_quadrature(const WeightProfile& w, double abs_tol) {
  std::array<double, 1> cut{};
  return integrate_piecewise([&](double t) { return std::max(1.0, w.value(t)); }, 0.0, 1.0,
                             abs_tol, kink_breakpoints(w, cut));
}

double weight_integral_quadrature(const WeightProfile& w, double a, double b, double abs_tol) {
  if (!(0.0 <= a && a <= b && b <= 1.0)) {
    throw DomainError("weight_integral_quadrature: need 0 <= a <= b <= 1");
  }
  return integrate_piecewise([&](double t) { return w.value(t); }, a, b, abs_tol);
}

ZhangBracket zhang_bracket(const WeightProfile& w, int k, const PTrigTable& table) {
  if (k < 1) throw DomainError("eigenvalue index k must be >= 1, got " + std::to_string(k));
  if (table.p().value() != w.p().value()) {
    throw DomainError("trig table and weight profile use different exponents");
  }
  const double p = w.p().value();
  ZhangBracket b{};
  b.k = k;
  b.q_minus = q_bar_minus(w);
  b.q_plus = q_bar_plus(w);
  const double kpi = k * table.pi_p();
  b.lower = std::pow(kpi / b.q_plus, p);
  b.upper = std::pow(kpi / b.q_minus, p);
  return b;
}

}  // namespace pleig
