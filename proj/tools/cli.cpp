#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <ostream>

#include "pleig/asymptotics.hpp"
#include "pleig/bounds.hpp"
#include "pleig/eigensolver.hpp"
#include "pleig/errors.hpp"
#include "pleig/ptrig.hpp"
#include "pleig/sweep_csv.hpp"
#include "pleig/weight.hpp"

namespace pleig::cli {

namespace {

enum class Format { kCsv, kHuman };

struct AnnulusFlags {
  double p = 2.0;
  int N = 3;
  double R = 1.0;
  double Rbar = 2.0;

  void attach(CLI::App& app) {
    app.add_option("--p", p, "exponent p > 1")->required();
    app.add_option("--N", N, "space dimension, N >= p")->required();
    app.add_option("--R", R, "inner radius")->required();
    app.add_option("--Rbar", Rbar, "outer radius, > R")->required();
  }

  ProblemConfig config() const { return {PExponent(p), N, R, Rbar}; }
};

struct Options {
  Format format = Format::kCsv;
  std::string out_path;

  // pip
  double pip_p = 2.0;
  // weight
  AnnulusFlags annulus;
  int samples = 11;
  // bracket / eigen
  int k = 1;
  std::optional<double> angle_tol;
  std::optional<double> lambda_tol;
  int eigen_samples = static_cast<int>(SolverOptions{}.samples);
  std::string plot_path;
  // sweep
  std::string family;
  int family_p = 0;
  int family_N = 0;
  int family_r = 0;
  std::vector<double> R_values{10.0, 1e2, 1e3, 1e4};
  int k_max = 3;
  unsigned threads = 1;
};

/// Writes to --out when given, else to the command's stdout.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw DomainError("cannot open output file " + path);
    }
    stream_ = file_ ? file_.get() : &fallback;
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

int cmd_pip(const Options& o, std::ostream& out) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", pi_p(PExponent(o.pip_p)));
  if (o.format == Format::kHuman) out << "pi_p(" << o.pip_p << ") = ";
  out << buf << '\n';
  return kExitOk;
}

int cmd_weight(const Options& o, std::ostream& stdout_) {
  if (o.samples < 2) throw DomainError("--samples must be >= 2");
  const WeightProfile w = make_weight(o.annulus.config());
  Sink sink(o.out_path, stdout_);
  auto& out = *sink;
  out << "t,q,dq\n";
  for (int i = 0; i < o.samples; ++i) {
    const double t = i == o.samples - 1 ? 1.0 : static_cast<double>(i) / (o.samples - 1);
    out << format_real(t) << ',' << format_real(q_eval(w, t)) << ','
        << format_real(q_derivative(w, t)) << '\n';
  }
  return kExitOk;
}

int cmd_bracket(const Options& o, std::ostream& stdout_) {
  const WeightProfile w = make_weight(o.annulus.config());
  const PTrigTable table{w.p()};
  const ZhangBracket b = zhang_bracket(w, o.k, table);
  Sink sink(o.out_path, stdout_);
  auto& out = *sink;
  if (o.format == Format::kHuman) {
    out << "q_minus = " << format_real(b.q_minus) << "\nq_plus  = " << format_real(b.q_plus)
        << "\n" << format_real(b.lower) << " <= lambda_" << b.k << " <= " << format_real(b.upper)
        << '\n';
  } else {
    out << "k,q_minus,q_plus,lower,upper\n"
        << b.k << ',' << format_real(b.q_minus) << ',' << format_real(b.q_plus) << ','
        << format_real(b.lower) << ',' << format_real(b.upper) << '\n';
  }
  return kExitOk;
}

int cmd_eigen(const Options& o, std::ostream& stdout_) {
  if (o.k < 1) throw DomainError("--k must be >= 1");
  if (o.eigen_samples < 2) throw DomainError("--samples must be >= 2");
  const WeightProfile w = make_weight(o.annulus.config());
  const PTrigTable table{w.p()};
  SolverOptions options;
  options.angle_tol = o.angle_tol.value_or(options.angle_tol);
  options.lambda_rel_tol = o.lambda_tol.value_or(options.lambda_rel_tol);
  options.samples = static_cast<std::size_t>(o.eigen_samples);
  const EigenResult r = eigenvalue(w, o.k, table, options);

  Sink sink(o.out_path, stdout_);
  auto& out = *sink;
  if (o.format == Format::kHuman) {
    out << "lambda_" << r.k << " = " << format_real(r.lambda) << "\nbracket [" << format_real(r.bracket.lower)
        << ", " << format_real(r.bracket.upper) << "]\ninterior zeros " << r.zero_count
        << "\nresidual " << format_real(r.residual) << '\n';
  } else {
    out << "k,lambda,lower,upper,zero_count,residual\n"
        << r.k << ',' << format_real(r.lambda) << ',' << format_real(r.bracket.lower) << ','
        << format_real(r.bracket.upper) << ',' << r.zero_count << ',' << format_real(r.residual)
        << '\n';
  }

  if (!o.plot_path.empty()) {
    std::ofstream plot(o.plot_path);
    if (!plot) throw DomainError("cannot open plot file " + o.plot_path);
    plot << "t,v\n";
    for (Eigen::Index i = 0; i < r.eigenfunction.size(); ++i) {
      plot << format_real(r.eigenfunction.t[i]) << ',' << format_real(r.eigenfunction.value[i])
           << '\n';
    }
  }
  return kExitOk;
}

Family make_family(const Options& o) {
  if (o.family == "pn") {
    if (o.family_p < 2) throw DomainError("family pn needs --p >= 2 (integer, p = N)");
    return Family::p_equals_n(o.family_p);
  }
  if (o.family == "p2") {
    if (o.family_N < 3) throw DomainError("family p2 needs --N >= 3");
    return Family::p2_subcritical(o.family_N);
  }
  if (o.family == "rfam") {
    if (o.family_r < 1) throw DomainError("family rfam needs --r >= 1");
    return Family::r_family(o.family_r);
  }
  throw DomainError("unknown family '" + o.family + "'");
}

int cmd_sweep(const Options& o, std::ostream& stdout_, std::ostream& err) {
  SweepSpec spec{make_family(o)};
  spec.R_values = o.R_values;
  spec.k_max = o.k_max;
  spec.solver.angle_tol = o.angle_tol.value_or(spec.solver.angle_tol);
  spec.solver.lambda_rel_tol = o.lambda_tol.value_or(spec.solver.lambda_rel_tol);
  spec.threads = o.threads;
  validate(spec);

  const std::vector<SweepRecord> records = run_sweep(spec);
  {
    Sink sink(o.out_path, stdout_);
    write_sweep_csv(*sink, records, "pleig sweep " + timestamp());
  }

  std::ostream& summary = o.out_path.empty() ? err : stdout_;
  bool failed = false;
  for (const SweepRecord& r : records) {
    if (!r.ok()) {
      failed = true;
      summary << "R=" << format_real(r.R) << " k=" << r.k << ": " << r.status << '\n';
    }
  }
  try {
    const ConvergenceReport report = convergence_report(records, 100.0 * spec.solver.lambda_rel_tol);
    for (const ConvergenceRow& row : report.rows) {
      summary << row.family.describe() << " k=" << row.k << ": gap(R=" << format_real(row.R.back())
              << ") = " << std::setprecision(3) << row.gaps.back() << " (tolerance "
              << row.tolerance << ")";
      if (row.exact) {
        summary << ", exact";
      } else if (row.slope) {
        summary << ", log-log slope " << std::setprecision(3) << *row.slope;
      }
      summary << (row.pass ? ", pass" : ", FAIL") << '\n';
      failed = failed || !row.pass;
    }
  } catch (const DomainError& e) {
    summary << "no convergence summary: " << e.what() << '\n';
  }
  return failed ? kExitNumerical : kExitOk;
}

/// Fills an unset tolerance from the environment. Malformed values are
/// usage errors rather than being silently skipped.
void tolerance_from_env(const char* name, std::optional<double>& slot) {
  const char* raw = std::getenv(name);
  if (slot || raw == nullptr || *raw == '\0') return;
  const std::string text(raw);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(name) + " must be a positive number, got '" + text + "'");
  }
  slot = v;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radial p-Laplacian eigenvalues on annuli"};
  app.require_subcommand(1);
  Options o;

  const std::map<std::string, Format> formats{{"csv", Format::kCsv}, {"human", Format::kHuman}};
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "csv or human")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  };
  auto add_tolerances = [&](CLI::App* sub) {
    sub->add_option("--tol", o.angle_tol, "angle integrator tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--lambda-tol", o.lambda_tol, "relative eigenvalue tolerance")
        ->check(CLI::PositiveNumber);
  };

  auto* pip = app.add_subcommand("pip", "print pi_p");
  pip->add_option("--p", o.pip_p, "exponent p > 1")->required();
  add_format(pip);

  auto* weight = app.add_subcommand("weight", "tabulate q(t) and q'(t) on [0,1]");
  o.annulus.attach(*weight);
  weight->add_option("--samples", o.samples, "equally spaced points, endpoints included");
  weight->add_option("--out", o.out_path, "output file (default stdout)");

  auto* bracket = app.add_subcommand("bracket", "two-sided bound on lambda_k");
  o.annulus.attach(*bracket);
  bracket->add_option("--k", o.k, "eigenvalue index")->required();
  bracket->add_option("--out", o.out_path, "output file (default stdout)");
  add_format(bracket);

  auto* eigen = app.add_subcommand("eigen", "k-th radial eigenvalue");
  o.annulus.attach(*eigen);
  eigen->add_option("--k", o.k, "eigenvalue index")->required();
  eigen->add_option("--samples", o.eigen_samples, "eigenfunction grid size");
  eigen->add_option("--plot-out", o.plot_path, "write eigenfunction samples (t,v) here");
  eigen->add_option("--out", o.out_path, "output file (default stdout)");
  add_tolerances(eigen);
  add_format(eigen);

  auto* sweep = app.add_subcommand("sweep", "lambda_k(R, R+1) along a radius sweep");
  sweep->add_option("--family", o.family, "pn (p=N), p2 (p=2, N>=3) or rfam (p=r+1, N=2r+1)")
      ->required()
      ->check(CLI::IsMember({"pn", "p2", "rfam"}));
  sweep->add_option("--p", o.family_p, "p = N for family pn");
  sweep->add_option("--N", o.family_N, "N for family p2");
  sweep->add_option("--r", o.family_r, "r for family rfam");
  sweep->add_option("--R", o.R_values, "inner radii, strictly increasing")->delimiter(',');
  sweep->add_option("--kmax", o.k_max, "largest eigenvalue index");
  sweep->add_option("--threads", o.threads, "worker threads, 0 = all cores");
  sweep->add_option("--out", o.out_path, "CSV file (default stdout)");
  add_tolerances(sweep);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    tolerance_from_env("PLEIG_ANGLE_TOL", o.angle_tol);
    tolerance_from_env("PLEIG_LAMBDA_TOL", o.lambda_tol);
    if (*pip) return cmd_pip(o, out);
    if (*weight) return cmd_weight(o, out);
    if (*bracket) return cmd_bracket(o, out);
    if (*eigen) return cmd_eigen(o, out);
    if (*sweep) return cmd_sweep(o, out, err);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace pleig::cli
