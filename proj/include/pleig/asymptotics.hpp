#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pleig/eigensolver.hpp"

namespace pleig {

/// One-parameter families of annuli whose eigenvalues lambda_k(R, R+1) tend
/// to (k*pi_p)^p as R grows.
class Family {
 public:
  enum class Kind {
    kPEqualsN,       ///< p = N >= 2
    kP2Subcritical,  ///< p = 2, N >= 3
    kRFamily,        ///< p = r+1, N = 2r+1, r >= 1
  };

  static Family p_equals_n(int p);
  static Family p2_subcritical(int N);
  static Family r_family(int r);

  Kind kind() const noexcept { return kind_; }
  double p() const noexcept { return p_; }
  int N() const noexcept { return N_; }
  std::optional<int> r() const noexcept { return r_; }
  /// Short name used on the command line and in CSV output: pn, p2, rfam.
  std::string tag() const;
  /// Human-readable, e.g. "p=N=3".
  std::string describe() const;

  ProblemConfig config(double R) const;

  friend bool operator==(const Family&, const Family&) = default;

 private:
  Family(Kind kind, double p, int N, std::optional<int> r) : kind_(kind), p_(p), N_(N), r_(r) {}

  Kind kind_;
  double p_;
  int N_;
  std::optional<int> r_;
};

struct SweepSpec {
  Family family;
  std::vector<double> R_values{10.0, 1e2, 1e3, 1e4};
  int k_max = 3;
  SolverOptions solver{.angle_tol = 1e-12, .lambda_rel_tol = 1e-10, .samples = 201};
  /// Worker threads for the (R, k) fan-out; 0 picks hardware concurrency.
  unsigned threads = 1;
};

/// Throws DomainError for empty or non-increasing R_values, R <= 0 or k_max < 1.
void validate(const SweepSpec& spec);

/// Above this R the weight deviates from 1 by less than about 1e-8 and the
/// records are marked in their status.
inline constexpr double kLargeRadius = 1e8;

struct SweepRecord {
  Family family;
  double R;
  int k;
  double lambda;
  double lower;
  double upper;
  double target;  ///< (k*pi_p)^p
  double gap;     ///< |lambda - target|
  double q0;
  double q1;
  double qbar_minus;
  double qbar_plus;
  std::string status;  ///< "ok", "ok-large-R" or "error: ..."

  bool ok() const noexcept { return status.starts_with("ok"); }
};

/// One record per (R, k) with Rbar = R + 1, sorted by (k, R). Solver
/// failures are caught and recorded in the status; the sweep continues.
std::vector<SweepRecord> run_sweep(const SweepSpec& spec);

struct ConvergenceRow {
  Family family;
  int k;
  std::vector<double> R;
  std::vector<double> gaps;
  double target;
  /// Least-squares slope of log(gap) against log(R) over gaps above the
  /// noise floor; empty when fewer than two such gaps exist.
  std::optional<double> slope;
  bool exact;  ///< every gap at the solver noise floor
  double tolerance;  ///< allowed gap at the largest R
  bool pass;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;

  bool all_pass() const noexcept;
};

/// Empirical decay rate of the gaps per (family, k) and a verdict:
/// exact, or gap(R_max) <= max(1e-6 * target, 5*k*target*p / R_max) with a
/// slope no shallower than -0.8. `noise_rel` is the relative gap treated as
/// solver noise. Throws DomainError when some (family, k) has fewer than two
/// distinct R values; failed records are skipped.
ConvergenceReport convergence_report(std::span<const SweepRecord> records,
                                     double noise_rel = 1e-8);

}  // namespace pleig
