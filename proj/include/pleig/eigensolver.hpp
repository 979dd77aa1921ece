#pragma once

#include <Eigen/Core>
#include <cstddef>

#include "pleig/bounds.hpp"
#include "pleig/ptrig.hpp"
#include "pleig/weight.hpp"

namespace pleig {

/// Paired samples (t_i, value_i) of a function on [0,1].
struct Samples {
  Eigen::VectorXd t;
  Eigen::VectorXd value;

  Eigen::Index size() const noexcept { return t.size(); }
};

struct ShootingResult {
  double lambda;
  double theta_end;
  Samples trace;  ///< (t, theta) at every accepted step, empty unless requested
  std::size_t steps;
};

struct SolverOptions {
  double angle_tol = 1e-10;       ///< local tolerance of the angle integrator
  double lambda_rel_tol = 1e-8;   ///< bisection stops at width <= tol * lambda
  int secant_steps = 3;
  std::size_t samples = 1001;     ///< eigenfunction grid, endpoints included
  std::size_t max_steps = 2'000'000;
};

struct EigenResult {
  int k;
  double lambda;
  Samples eigenfunction;  ///< max |v| = 1, positive first bump
  int zero_count;         ///< sign changes of v in (0, 1), counted on the integrator nodes
  ZhangBracket bracket;
  double residual;        ///< |v(1)| after normalization
  double theta_end;
  int miss_evaluations;
};

/// Integrates the scaled Pruefer angle from theta(0) = 0 to t = 1 with an
/// embedded Dormand-Prince 5(4) pair. theta(1) = k*pi_p exactly when lambda
/// is the k-th eigenvalue. Throws DomainError for lambda <= 0 or tol <= 0,
/// IntegrationFailure if step control cannot meet tol.
ShootingResult shoot(const WeightProfile& w, double lambda, const PTrigTable& table, double tol,
                     bool record_trace = false, std::size_t max_steps = 2'000'000);

/// k-th radial eigenvalue by bisection on theta(1; lambda) - k*pi_p inside
/// the Zhang bracket, polished with Illinois-safeguarded secant steps.
///
/// Throws DomainError for k < 1, BracketFailure if the miss function does
/// not change sign across the bracket, MonotonicityFailure if it is seen to
/// decrease, IntegrationFailure from the integrator.
EigenResult eigenvalue(const WeightProfile& w, int k, const PTrigTable& table,
                       const SolverOptions& options = {});

struct DirectShot {
  double v_end;
  double w_end;      ///< |v'|^{p-2} v' at t = 1
  int sign_changes;  ///< sign changes of v on (0, 1]
  std::size_t steps;
};

/// Cross-check path: integrates v' = |w|^{1/(p-1)} sgn w,
/// w' = -lambda q |v|^{p-2} v from v(0) = 0, w(0) = 1. Stiff near zeros of
/// v or v' when p is far from 2; failures surface as IntegrationFailure.
DirectShot direct_shoot(const WeightProfile& w, double lambda, double tol,
                        std::size_t max_steps = 5'000'000);

/// v(1) from direct_shoot.
double direct_shoot_oracle(const WeightProfile& w, double lambda, double tol);

}  // namespace pleig
