#pragma once

#include <optional>

#include "pleig/ptrig.hpp"

namespace pleig {

/// Radial Dirichlet problem on the annulus R < |x| < Rbar in R^N.
struct ProblemConfig {
  PExponent p;
  int N;
  double R;
  double Rbar;
};

/// Throws DomainError unless 1 < p <= N, N >= 2 and 0 < R < Rbar (finite).
void validate(const ProblemConfig& config);

enum class WeightCase {
  kSubcritical,  ///< N > p
  kConformal,    ///< N == p
  kUnit,         ///< q == 1, the limit profile; test-only
};

/// Constants of the annulus-to-interval map.
///
/// Subcritical: with e = (N-p)/(p-1),
///   t = B - A / r^e,  A = (R*Rbar)^e / (Rbar^e - R^e),  B = Rbar^e / (Rbar^e - R^e).
/// The weight is evaluated through D = (Rbar/R)^e - 1 (computed with
/// expm1/log1p) as q(t) = K * (1 + D(1-t))^{-m}, K = (Rbar*D/e)^p,
/// m = p(1 + 1/e), which has no cancellation for Rbar close to R.
///
/// Conformal: with l = ln(Rbar/R), q(t) = (R*l)^p * exp(p*l*t).
struct TransformConstants {
  WeightCase kind = WeightCase::kUnit;
  double A = 0.0;  ///< subcritical only; may overflow to inf for huge (R, e)
  double B = 0.0;  ///< subcritical only
  double e = 0.0;  ///< (N-p)/(p-1)
  double D = 0.0;
  double K = 1.0;
  double m = 0.0;
  double log_ratio = 0.0;  ///< ln(Rbar/R), conformal only
};

/// The transformed weight q(t) on [0,1]. Strictly positive, C^1 and strictly
/// increasing for the two annulus cases. Immutable.
class WeightProfile {
 public:
  PExponent p() const noexcept { return p_; }
  /// Empty for the synthetic unit profile.
  const std::optional<ProblemConfig>& config() const noexcept { return config_; }
  const TransformConstants& constants() const noexcept { return constants_; }
  WeightCase kind() const noexcept { return constants_.kind; }
  /// t* in (0,1) with q(t*) = 1, present iff q(0) < 1 < q(1).
  std::optional<double> kink() const noexcept { return kink_; }

  /// Unchecked evaluation for inner loops; t must lie in [0,1].
  double value(double t) const noexcept;
  double derivative(double t) const noexcept;
  /// Q(t) = integral of q over [0,t].
  double antiderivative(double t) const noexcept;

  double q0() const noexcept { return value(0.0); }
  double q1() const noexcept { return value(1.0); }

 private:
  WeightProfile(PExponent p, std::optional<ProblemConfig> config, TransformConstants constants);

  friend WeightProfile make_weight(const ProblemConfig& config);
  friend WeightProfile make_unit_weight_for_testing(PExponent p);

  PExponent p_;
  std::optional<ProblemConfig> config_;
  TransformConstants constants_;
  std::optional<double> kink_;
};

WeightProfile make_weight(const ProblemConfig& config);

/// q == 1 on [0,1]. Not an annulus weight; exists so the degenerate bracket
/// and the constant-weight spectrum can be exercised directly.
WeightProfile make_unit_weight_for_testing(PExponent p);

/// Checked accessors; throw DomainError for t outside [0,1].
double q_eval(const WeightProfile& w, double t);
double q_derivative(const WeightProfile& w, double t);
double q_antiderivative(const WeightProfile& w, double t);

std::optional<double> find_kink(const WeightProfile& w);

}  // namespace pleig
