#include "pleig/weight.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "pleig/errors.hpp"

namespace pleig {

void validate(const ProblemConfig& c) {
  std::ostringstream msg;
  if (c.N < 2) {
    msg << "dimension N must be >= 2, got " << c.N;
  } else if (c.p.value() > c.N) {
    msg << "need p <= N, got p = " << c.p.value() << ", N = " << c.N;
  } else if (!std::isfinite(c.R) || !std::isfinite(c.Rbar) || !(c.R > 0.0)) {
    msg << "radii must be finite with R > 0, got R = " << c.R << ", Rbar = " << c.Rbar;
  } else if (!(c.R < c.Rbar)) {
    msg << "need R < Rbar, got R = " << c.R << ", Rbar = " << c.Rbar;
  } else {
    return;
  }
  throw DomainError(msg.str());
}

WeightProfile::WeightProfile(PExponent p, std::optional<ProblemConfig> config,
                             TransformConstants constants)
    : p_(p), config_(std::move(config)), constants_(constants) {}

double WeightProfile::value(double t) const noexcept {
  const auto& c = constants_;
  switch (c.kind) {
    case WeightCase::kSubcritical:
      return c.K * std::exp(-c.m * std::log1p(c.D * (1.0 - t)));
    case WeightCase::kConformal:
      return c.K * std::exp(p_.value() * c.log_ratio * t);
    case WeightCase::kUnit:
      break;
  }
  return 1.0;
}

double WeightProfile::derivative(double t) const noexcept {
  const auto& c = constants_;
  switch (c.kind) {
    case WeightCase::kSubcritical:
      return value(t) * c.m * c.D / (1.0 + c.D * (1.0 - t));
    case WeightCase::kConformal:
      return value(t) * p_.value() * c.log_ratio;
    case WeightCase::kUnit:
      break;
  }
  return 0.0;
}

double WeightProfile::antiderivative(double t) const noexcept {
  const auto& c = constants_;
  switch (c.kind) {
    case WeightCase::kSubcritical: {
      // K/(D(m-1)) * [(1+D(1-t))^{1-m} - (1+D)^{1-m}], factored to avoid
      // cancellation when D is small.
      // The head combines K and (1+D)^{1-m} in logs since either may be
      // out of range on its own when D is huge.
      const double head =
          std::exp(std::log(c.K) + (1.0 - c.m) * std::log1p(c.D)) / (c.D * (c.m - 1.0));
      // log((1 + D(1-t)) / (1 + D)); the direct log1p argument rounds to -1
      // near t = 1 for large D.
      const double x = c.D * t / (1.0 + c.D);
      const double log_ratio =
          x < 0.5 ? std::log1p(-x) : std::log1p(c.D * (1.0 - t)) - std::log1p(c.D);
      return head * std::expm1((1.0 - c.m) * log_ratio);
    }
    case WeightCase::kConformal: {
      const double rate = p_.value() * c.log_ratio;
      return c.K * std::expm1(rate * t) / rate;
    }
    case WeightCase::kUnit:
      break;
  }
  return t;
}

namespace {

std::optional<double> closed_form_kink(const WeightProfile& w) {
  const auto& c = w.constants();
  switch (c.kind) {
    case WeightCase::kSubcritical:
      // (1 + D(1-t))^m = K
      return 1.0 - std::expm1(std::log(c.K) / c.m) / c.D;
    case WeightCase::kConformal:
      // K^{1/p} exp(l t) = 1
      return -std::log(c.K) / (w.p().value() * c.log_ratio);
    case WeightCase::kUnit:
      break;
  }
  return std::nullopt;
}

constexpr double kKinkResidual = 1e-13;

std::optional<double> locate_kink(const WeightProfile& w) {
  if (!(w.q0() < 1.0 && w.q1() > 1.0)) return std::nullopt;

  auto t = closed_form_kink(w);
  if (t && *t > 0.0 && *t < 1.0) {
    // Newton polish on q(t) - 1.
    double s = *t;
    for (int i = 0; i < 3; ++i) {
      const double next = s - (w.value(s) - 1.0) / w.derivative(s);
      if (!(next > 0.0 && next < 1.0)) break;
      s = next;
    }
    if (std::abs(w.value(s) - 1.0) <= kKinkResidual) return s;
  }

  // Bisection fallback; q is strictly increasing.
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (w.value(mid) < 1.0 ? lo : hi) = mid;
  }
  const double s = std::abs(w.value(lo) - 1.0) < std::abs(w.value(hi) - 1.0) ? lo : hi;
  return s;
}

void require_unit_interval(double t, const char* who) {
  if (!(t >= 0.0 && t <= 1.0)) {
    std::ostringstream msg;
    msg << who << ": t must lie in [0,1], got " << t;
    throw DomainError(msg.str());
  }
}

}  // namespace

WeightProfile make_weight(const ProblemConfig& config) {
  validate(config);
  const double p = config.p.value();
  const double R = config.R;
  const double Rbar = config.Rbar;
  const double log_ratio = std::log1p((Rbar - R) / R);

  TransformConstants c;
  if (static_cast<double>(config.N) > p) {
    c.kind = WeightCase::kSubcritical;
    c.e = (config.N - p) / (p - 1.0);
    c.D = std::expm1(c.e * log_ratio);
    c.B = (1.0 + c.D) / c.D;
    c.A = std::pow(Rbar, c.e) / c.D;
    c.m = p * (1.0 + 1.0 / c.e);
    c.K = std::exp(p * (std::log(Rbar) + std::log(c.D) - std::log(c.e)));
  } else {
    c.kind = WeightCase::kConformal;
    c.log_ratio = log_ratio;
    c.K = std::pow(R * log_ratio, p);
  }

  WeightProfile w(config.p, config, c);
  const double q0 = w.q0();
  const double q1 = w.q1();
  if (!(std::isfinite(q0) && std::isfinite(q1) && q0 > 0.0 && std::isfinite(w.antiderivative(1.0)))) {
    throw DomainError("weight for this annulus is not representable in double precision "
                      "(Rbar/R too large for the given p and N)");
  }
  w.kink_ = locate_kink(w);
  return w;
}

WeightProfile make_unit_weight_for_testing(PExponent p) {
  return WeightProfile(p, std::nullopt, TransformConstants{});
}

double q_eval(const WeightProfile& w, double t) {
  require_unit_interval(t, "q_eval");
  return w.value(t);
}

double q_derivative(const WeightProfile& w, double t) {
  require_unit_interval(t, "q_derivative");
  return w.derivative(t);
}

double q_antiderivative(const WeightProfile& w, double t) {
  require_unit_interval(t, "q_antiderivative");
  return w.antiderivative(t);
}

std::optional<double> find_kink(const WeightProfile& w) { return w.kink(); }

}  // namespace pleig
