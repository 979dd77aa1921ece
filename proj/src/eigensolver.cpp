#include "pleig/eigensolver.hpp"

#include <boost/numeric/odeint/stepper/controlled_runge_kutta.hpp>
#include <boost/numeric/odeint/stepper/generation.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_dopri5.hpp>

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pleig/errors.hpp"

namespace pleig {

namespace odeint = boost::numeric::odeint;

namespace {

constexpr double kMinStep = 1e-14;

/// Drives a controlled Dormand-Prince stepper over [t, t_end] without
/// overshooting, calling on_step(t, x) after each accepted step.
template <class State>
class StepDriver {
 public:
  StepDriver(double tol, double initial_step, std::size_t max_steps)
      : stepper_(odeint::make_controlled(tol, tol, odeint::runge_kutta_dopri5<State>())),
        dt_(initial_step),
        max_steps_(max_steps) {}

  template <class System, class OnStep>
  void advance(System&& sys, State& x, double& t, double t_end, OnStep&& on_step) {
    while (t_end - t > 0.0) {
      double dt = std::min(dt_, t_end - t);
      const bool clamped = dt < dt_;
      const double t_before = t;
      if (stepper_.try_step(sys, x, t, dt) == odeint::success) {
        if (++steps_ > max_steps_) {
          throw IntegrationFailure("integrator exceeded " + std::to_string(max_steps_) +
                                   " steps");
        }
        // Landing exactly on t_end keeps sample grids aligned.
        if (clamped || t_end - t < 4.0 * std::numeric_limits<double>::epsilon() * t_end) {
          t = t_end;
        }
        // A step clamped to the interval end says nothing about the natural
        // step size; keep the previous one.
        dt_ = clamped ? std::max(dt_, dt) : dt;
        on_step(t, x);
      } else {
        dt_ = dt;
        if (dt_ < kMinStep) {
          std::ostringstream msg;
          msg << "step size underflow at t = " << t_before << " (h = " << dt_ << ")";
          throw IntegrationFailure(msg.str());
        }
      }
    }
  }

  std::size_t steps() const noexcept { return steps_; }

 private:
  decltype(odeint::make_controlled(0.0, 0.0, odeint::runge_kutta_dopri5<State>())) stepper_;
  double dt_;
  std::size_t max_steps_;
  std::size_t steps_ = 0;
};

void check_lambda(double lambda, const char* who) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    std::ostringstream msg;
    msg << who << ": lambda must be positive and finite, got " << lambda;
    throw DomainError(msg.str());
  }
}

void check_tol(double tol, const char* who) {
  if (!(tol > 0.0)) throw DomainError(std::string(who) + ": tolerance must be positive");
}

void check_table(const WeightProfile& w, const PTrigTable& table) {
  if (table.p().value() != w.p().value()) {
    throw DomainError("trig table and weight profile use different exponents");
  }
}

double initial_step(double scale) { return std::min(1e-2, 0.1 / scale); }

/// Mean of q over [0,1]. The Pruefer scale is (lambda * q_ref)^(1/p), which
/// keeps the angle rate near the scale wherever q is close to its mean; with
/// the bare lambda^(1/p) the rate swings by a factor 1/q on thin annuli,
/// where q is tiny and lambda huge.
double reference_weight(const WeightProfile& w) { return w.antiderivative(1.0); }

/// Smallest gamma making x^(exponent * gamma) at least C^6, or 1 when the
/// exponent is an integer (the expansion is then analytic).
int smoothing_power(double exponent) {
  if (std::abs(exponent - std::round(exponent)) < 1e-12) return 1;
  return static_cast<int>(std::ceil(6.0 / exponent));
}

struct AngleRun {
  double theta_end;
  bool capped;  ///< stopped at a quarter boundary past the cap, before t = 1
  std::size_t steps;
};

/// Integrates t and ln rho as functions of the Pruefer angle.
///
/// sin_p is only finitely smooth at multiples of pi_p/2 (|x|^p at its zeros,
/// |x|^{p/(p-1)} at its extrema), which fools the embedded error estimate.
/// The independent variable is therefore the angle, taken one quarter of a
/// half period at a time, and each quarter is stretched near its singular end
/// with theta = end +- L*sigma^gamma so the integrand is at least C^6 in sigma.
/// Since theta increases with t, stopping once theta passes a cap still
/// certifies theta(1) >= cap.
class AngleIntegrator {
 public:
  using State = std::array<double, 2>;

  AngleIntegrator(const WeightProfile& w, double lambda, const PTrigTable& table, double tol,
                  std::size_t max_steps, double theta_cap, bool with_amplitude)
      : w_(w),
        table_(table),
        lambda_(lambda),
        q_ref_(reference_weight(w)),
        scale_(std::pow(lambda * q_ref_, 1.0 / w.p().value())),
        quarter_(0.25 * table.pi_p()),
        gamma_zero_(smoothing_power(w.p().value())),
        gamma_peak_(smoothing_power(w.p().value() / (w.p().value() - 1.0))),
        max_steps_(max_steps),
        theta_cap_(theta_cap),
        with_amplitude_(with_amplitude) {
    // tol is meant for theta(1). Local errors in t add up over roughly
    // 4*theta(1)/pi_p quarters and are amplified by d(theta)/dt, which is at
    // most scale * max(1, q/q_ref).
    const double q_max = std::max(w.value(0.0), w.value(1.0));
    const double rate_max = scale_ * std::max(1.0, q_max / q_ref_);
    const double theta_est = std::min(theta_cap, rate_max);
    step_tol_ = std::max(tol / (1.0 + 4.0 * theta_est * rate_max / table.pi_p()), kMinTol);
  }

  /// Callable view for odeint, which copies its system argument.
  auto system() const {
    return [this](const State& x, State& dxdt, double sigma) { (*this)(x, dxdt, sigma); };
  }

  double angle(double sigma) const {
    return singular_left_ ? theta_lo_ + quarter_ * std::pow(sigma, gamma_)
                          : theta_lo_ + quarter_ * (1.0 - std::pow(1.0 - sigma, gamma_));
  }

  void operator()(const State& x, State& dxdt, double sigma) const {
    const double t = std::min(x[0], 1.0);
    const double q = w_.value(t);
    const double theta = angle(sigma);
    const double angle_rate = singular_left_ ? quarter_ * gamma_ * std::pow(sigma, gamma_ - 1)
                                             : quarter_ * gamma_ * std::pow(1.0 - sigma, gamma_ - 1);
    dxdt[0] = angle_rate / prufer_rhs(table_, theta, lambda_ * q, scale_);
    dxdt[1] = 0.0;
    if (with_amplitude_) {
      const PTrigPoint pt = table_.eval(theta);
      if (pt.sin != 0.0) {
        dxdt[1] = scale_ * (1.0 - q / q_ref_) * pt.cos * pt.sin_pow / pt.sin * dxdt[0];
      }
    }
  }

  /// One Dormand-Prince step of length len from (sigma0, x0).
  State step_from(const State& x0, double sigma0, double len) const {
    odeint::runge_kutta_dopri5<State> rk;
    State out{};
    rk.do_step(system(), x0, sigma0, out, len);
    return out;
  }

  /// Length h* in [0, h] with t(sigma0 + h*) = t_target along a single step,
  /// given x0[0] <= t_target <= t(sigma0 + h). Illinois iteration.
  double length_to(const State& x0, double sigma0, double h, double t_target) const {
    auto miss = [&](double len) { return step_from(x0, sigma0, len)[0] - t_target; };
    double lo = 0.0;
    double hi = h;
    double f_lo = x0[0] - t_target;
    double f_hi = miss(hi);
    if (f_lo >= 0.0) return 0.0;
    int side = 0;
    for (int i = 0; i < 100 && hi - lo > 1e-16 * h; ++i) {
      double s = lo - f_lo * (hi - lo) / (f_hi - f_lo);
      if (!(s > lo && s < hi)) s = 0.5 * (lo + hi);
      const double f_s = miss(s);
      if (std::abs(f_s) <= 2.0 * std::numeric_limits<double>::epsilon()) return s;
      if (f_s < 0.0) {
        lo = s;
        f_lo = f_s;
        if (side == -1) f_hi *= 0.5;
        side = -1;
      } else {
        hi = s;
        f_hi = f_s;
        if (side == 1) f_lo *= 0.5;
        side = 1;
      }
    }
    return 0.5 * (lo + hi);
  }

  /// Runs from theta = 0 until t = 1 or the cap. on_step(sigma_prev, x_prev,
  /// h, x_new) follows every accepted step; the last step is cut to end
  /// exactly at t = 1.
  template <class OnStep>
  AngleRun run(OnStep&& on_step) {
    std::size_t steps = 0;
    State x{0.0, 0.0};
    double dsigma = 0.1;
    for (long quarter_index = 0;; ++quarter_index) {
      theta_lo_ = quarter_index * quarter_;
      if (theta_lo_ >= theta_cap_) return {theta_lo_, true, steps};
      // Quarters alternate: zero | peak, peak | zero.
      singular_left_ = quarter_index % 2 == 0;
      const bool touches_zero = quarter_index % 4 == 0 || quarter_index % 4 == 3;
      gamma_ = touches_zero ? gamma_zero_ : gamma_peak_;
      auto stepper =
          odeint::make_controlled(step_tol_, step_tol_, odeint::runge_kutta_dopri5<State>());

      double sigma = 0.0;
      while (sigma < 1.0) {
        const bool to_end = 1.0 - sigma <= dsigma;
        const double h = to_end ? 1.0 - sigma : dsigma;
        const State x_prev = x;
        const double sigma_prev = sigma;
        double trial = h;
        if (stepper.try_step(system(), x, sigma, trial) != odeint::success) {
          dsigma = trial;
          if (dsigma < kMinStep) {
            std::ostringstream msg;
            msg << "angle step underflow near theta = " << angle(sigma_prev);
            throw IntegrationFailure(msg.str());
          }
          continue;
        }
        if (++steps > max_steps_) {
          throw IntegrationFailure("integrator exceeded " + std::to_string(max_steps_) +
                                   " steps");
        }
        if (x[0] >= 1.0) {
          const double h_end = x[0] == 1.0 ? h : length_to(x_prev, sigma_prev, h, 1.0);
          State x_end = step_from(x_prev, sigma_prev, h_end);
          x_end[0] = 1.0;
          on_step(sigma_prev, x_prev, h_end, x_end);
          return {angle(sigma_prev + h_end), false, steps};
        }
        if (to_end) sigma = 1.0;
        dsigma = to_end ? std::max(dsigma, trial) : trial;
        on_step(sigma_prev, x_prev, sigma - sigma_prev, x);
      }
    }
  }

 private:
  static constexpr double kMinTol = 1e-14;

  const WeightProfile& w_;
  const PTrigTable& table_;
  double lambda_;
  double q_ref_;
  double scale_;
  double quarter_;
  int gamma_zero_;
  int gamma_peak_;
  std::size_t max_steps_;
  double theta_cap_;
  bool with_amplitude_;
  double step_tol_ = 0.0;

  double theta_lo_ = 0.0;
  bool singular_left_ = true;
  int gamma_ = 1;
};

struct SampledMode {
  Samples samples;
  double theta_end;
  int sign_changes;  ///< over the integrator nodes in (0, 1)
};

/// v = rho sin_p(theta) on a uniform grid; each grid point is located inside
/// the accepted angle step that crosses it. Sign changes are counted on the
/// integrator nodes, which cluster where v oscillates; a uniform grid misses
/// zeros once q varies over many decades. Nodes within zero_band of a
/// multiple of pi_p carry no sign, so the boundary zero at t = 1 is not
/// counted when theta(1) lands a rounding error past k*pi_p.
SampledMode sample_eigenfunction(const WeightProfile& w, double lambda, const PTrigTable& table,
                                 double tol, std::size_t samples, std::size_t max_steps,
                                 double zero_band) {
  using State = AngleIntegrator::State;
  const auto n = static_cast<Eigen::Index>(std::max<std::size_t>(samples, 2));
  Samples out{Eigen::VectorXd::LinSpaced(n, 0.0, 1.0), Eigen::VectorXd::Zero(n)};
  AngleIntegrator integrator(w, lambda, table, tol, max_steps,
                             std::numeric_limits<double>::infinity(), true);
  Eigen::Index next = 1;
  int changes = 0;
  int last_sign = 0;
  auto on_step = [&](double sigma0, const State& x0, double h, const State& x1) {
    if (x1[0] < 1.0) {
      const double theta = integrator.angle(sigma0 + h);
      const double from_zero = std::remainder(theta, table.pi_p());
      const int half_period = static_cast<int>(std::floor(theta / table.pi_p()));
      const int sign = half_period % 2 == 0 ? 1 : -1;
      if (std::abs(from_zero) > zero_band) {
        if (last_sign != 0 && sign != last_sign) ++changes;
        last_sign = sign;
      }
    }
    for (; next < n && out.t[next] <= x1[0]; ++next) {
      const double len = next == n - 1 && x1[0] == 1.0
                             ? h
                             : integrator.length_to(x0, sigma0, h, out.t[next]);
      const State x = len == h ? x1 : integrator.step_from(x0, sigma0, len);
      out.value[next] = std::exp(x[1]) * table.eval(integrator.angle(sigma0 + len)).sin;
    }
  };
  const double theta_end = integrator.run(on_step).theta_end;
  return {std::move(out), theta_end, changes};
}

}  // namespace

ShootingResult shoot(const WeightProfile& w, double lambda, const PTrigTable& table, double tol,
                     bool record_trace, std::size_t max_steps) {
  check_lambda(lambda, "shoot");
  check_tol(tol, "shoot");
  check_table(w, table);

  using State = AngleIntegrator::State;
  std::vector<double> ts{0.0};
  std::vector<double> thetas{0.0};
  AngleIntegrator integrator(w, lambda, table, tol, max_steps,
                             std::numeric_limits<double>::infinity(), false);
  const AngleRun run = integrator.run([&](double sigma0, const State&, double h, const State& x1) {
    if (record_trace) {
      ts.push_back(x1[0]);
      thetas.push_back(integrator.angle(sigma0 + h));
    }
  });

  ShootingResult r{lambda, run.theta_end, {}, run.steps};
  if (record_trace) {
    r.trace.t = Eigen::Map<const Eigen::VectorXd>(ts.data(), static_cast<Eigen::Index>(ts.size()));
    r.trace.value =
        Eigen::Map<const Eigen::VectorXd>(thetas.data(), static_cast<Eigen::Index>(thetas.size()));
  }
  return r;
}

EigenResult eigenvalue(const WeightProfile& w, int k, const PTrigTable& table,
                       const SolverOptions& options) {
  if (k < 1) throw DomainError("eigenvalue index k must be >= 1, got " + std::to_string(k));
  check_tol(options.angle_tol, "eigenvalue");
  check_tol(options.lambda_rel_tol, "eigenvalue");
  check_table(w, table);

  EigenResult result{};
  result.k = k;
  result.bracket = zhang_bracket(w, k, table);

  const double target = k * table.pi_p();
  // Shots far above the root only need to show theta(1) > target, so they
  // stop half a period past it. Capped values still order correctly against
  // uncapped ones.
  const double cap = target + 0.5 * table.pi_p();
  auto miss = [&](double lambda) {
    ++result.miss_evaluations;
    check_lambda(lambda, "eigenvalue");
    AngleIntegrator integrator(w, lambda, table, options.angle_tol, options.max_steps, cap, false);
    return integrator.run([](double, const AngleIntegrator::State&, double,
                             const AngleIntegrator::State&) {}).theta_end - target;
  };
  const double slack = 10.0 * options.angle_tol * std::max(1.0, target);

  double lo = result.bracket.lower;
  double hi = result.bracket.upper;
  double f_lo = miss(lo);
  double f_hi = hi > lo ? miss(hi) : f_lo;
  if (f_lo > slack || f_hi < -slack) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "miss function does not change sign on [" << lo << ", " << hi
        << "]: theta(1) - k*pi_p = " << f_lo << ", " << f_hi;
    throw BracketFailure(msg.str());
  }

  double lambda;
  if (f_lo >= 0.0) {
    lambda = lo;
  } else if (f_hi <= 0.0) {
    lambda = hi;
  } else {
    while (hi - lo > options.lambda_rel_tol * 0.5 * (lo + hi)) {
      // Wide brackets (thin annuli) span decades; split them geometrically.
      const double mid = hi > 2.0 * lo ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double f_mid = miss(mid);
      if (f_mid < f_lo - slack || f_mid > f_hi + slack) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "theta(1; lambda) not increasing near lambda = " << mid;
        throw MonotonicityFailure(msg.str());
      }
      if (f_mid == 0.0) {
        lo = hi = mid;
        f_lo = f_hi = 0.0;
        break;
      }
      (f_mid < 0.0 ? lo : hi) = mid;
      (f_mid < 0.0 ? f_lo : f_hi) = f_mid;
    }

    lambda = 0.5 * (lo + hi);
    // Illinois-modified secant inside [lo, hi].
    int last_side = 0;
    for (int i = 0; i < options.secant_steps && hi > lo && f_hi > f_lo; ++i) {
      const double s = lo - f_lo * (hi - lo) / (f_hi - f_lo);
      if (!(s > lo && s < hi)) break;
      const double f_s = miss(s);
      lambda = s;
      if (f_s == 0.0) break;
      if (f_s < 0.0) {
        lo = s;
        f_lo = f_s;
        if (last_side == -1) f_hi *= 0.5;
        last_side = -1;
      } else {
        hi = s;
        f_hi = f_s;
        if (last_side == 1) f_lo *= 0.5;
        last_side = 1;
      }
    }
  }

  result.lambda = lambda;
  SampledMode mode = sample_eigenfunction(w, lambda, table, options.angle_tol, options.samples,
                                         options.max_steps, slack);
  result.eigenfunction = std::move(mode.samples);
  result.theta_end = mode.theta_end;
  result.zero_count = mode.sign_changes;

  Eigen::VectorXd& v = result.eigenfunction.value;
  const double peak = v.cwiseAbs().maxCoeff();
  if (peak > 0.0) {
    v /= peak;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (std::abs(v[i]) > 1e-3) {
        if (v[i] < 0.0) v = -v;
        break;
      }
    }
  }
  result.residual = std::abs(v[v.size() - 1]);
  return result;
}

DirectShot direct_shoot(const WeightProfile& w, double lambda, double tol, std::size_t max_steps) {
  check_lambda(lambda, "direct_shoot");
  check_tol(tol, "direct_shoot");

  using State = std::array<double, 2>;
  const double p = w.p().value();
  const double inv = 1.0 / (p - 1.0);
  auto system = [&](const State& x, State& dxdt, double t) {
    dxdt[0] = std::copysign(std::pow(std::abs(x[1]), inv), x[1]);
    dxdt[1] = -lambda * w.value(t) * std::copysign(std::pow(std::abs(x[0]), p - 1.0), x[0]);
  };

  DirectShot shot{};
  int last_sign = 0;
  StepDriver<State> driver(tol, initial_step(std::pow(lambda * reference_weight(w), 1.0 / p)), max_steps);
  State x{0.0, 1.0};
  double t = 0.0;
  driver.advance(system, x, t, 1.0, [&](double, const State& xi) {
    const int s = (xi[0] > 0.0) - (xi[0] < 0.0);
    if (s != 0) {
      if (last_sign != 0 && s != last_sign) ++shot.sign_changes;
      last_sign = s;
    }
  });
  shot.v_end = x[0];
  shot.w_end = x[1];
  shot.steps = driver.steps();
  return shot;
}

double direct_shoot_oracle(const WeightProfile& w, double lambda, double tol) {
  return direct_shoot(w, lambda, tol).v_end;
}

}  // namespace pleig
