#include "pleig/asymptotics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>
#include <utility>

#include "pleig/errors.hpp"

namespace pleig {

Family Family::p_equals_n(int p) {
  if (p < 2) throw DomainError("family p=N requires p >= 2");
  return Family(Kind::kPEqualsN, p, p, std::nullopt);
}

Family Family::p2_subcritical(int N) {
  if (N < 3) throw DomainError("family p=2 requires N >= 3");
  return Family(Kind::kP2Subcritical, 2.0, N, std::nullopt);
}

Family Family::r_family(int r) {
  if (r < 1) throw DomainError("family p=r+1, N=2r+1 requires r >= 1");
  return Family(Kind::kRFamily, r + 1.0, 2 * r + 1, r);
}

std::string Family::tag() const {
  switch (kind_) {
    case Kind::kPEqualsN:
      return "pn";
    case Kind::kP2Subcritical:
      return "p2";
    case Kind::kRFamily:
      return "rfam";
  }
  return "?";
}

std::string Family::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::kPEqualsN:
      out << "p=N=" << N_;
      break;
    case Kind::kP2Subcritical:
      out << "p=2,N=" << N_;
      break;
    case Kind::kRFamily:
      out << "r=" << *r_ << " (p=" << p_ << ",N=" << N_ << ")";
      break;
  }
  return out.str();
}

ProblemConfig Family::config(double R) const { return {PExponent(p_), N_, R, R + 1.0}; }

void validate(const SweepSpec& spec) {
  if (spec.R_values.empty()) throw DomainError("sweep needs at least one R value");
  for (std::size_t i = 0; i < spec.R_values.size(); ++i) {
    const double R = spec.R_values[i];
    if (!(R > 0.0) || !std::isfinite(R)) throw DomainError("sweep R values must be positive");
    if (i > 0 && !(R > spec.R_values[i - 1])) {
      throw DomainError("sweep R values must be strictly increasing");
    }
  }
  if (spec.k_max < 1) throw DomainError("sweep k_max must be >= 1");
}

namespace {

SweepRecord solve_record(const Family& family, double R, int k, const PTrigTable& table,
                         const SolverOptions& options) {
  SweepRecord rec{family, R, k, NAN, NAN, NAN, NAN, NAN, NAN, NAN, NAN, NAN, "ok"};
  rec.target = std::pow(k * pi_p(PExponent(family.p())), family.p());
  try {
    const WeightProfile w = make_weight(family.config(R));
    rec.q0 = w.q0();
    rec.q1 = w.q1();
    const EigenResult eig = eigenvalue(w, k, table, options);
    rec.lambda = eig.lambda;
    rec.lower = eig.bracket.lower;
    rec.upper = eig.bracket.upper;
    rec.qbar_minus = eig.bracket.q_minus;
    rec.qbar_plus = eig.bracket.q_plus;
    rec.gap = std::abs(eig.lambda - rec.target);
    if (R > kLargeRadius) rec.status = "ok-large-R";
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    rec.status = "error: " + msg;
  }
  return rec;
}

}  // namespace

std::vector<SweepRecord> run_sweep(const SweepSpec& spec) {
  validate(spec);
  const PTrigTable table{PExponent(spec.family.p())};

  std::vector<std::pair<int, double>> jobs;
  for (int k = 1; k <= spec.k_max; ++k) {
    for (double R : spec.R_values) jobs.emplace_back(k, R);
  }
  // Slots are fixed up front so the output order never depends on which
  // worker finishes first.
  std::vector<SweepRecord> records(jobs.size(),
                                   SweepRecord{spec.family, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, {}});
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      records[i] = solve_record(spec.family, jobs[i].second, jobs[i].first, table, spec.solver);
    }
  };

  unsigned threads = spec.threads == 0 ? std::thread::hardware_concurrency() : spec.threads;
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(jobs.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  return records;
}

bool ConvergenceReport::all_pass() const noexcept {
  return std::all_of(rows.begin(), rows.end(), [](const ConvergenceRow& r) { return r.pass; });
}

ConvergenceReport convergence_report(std::span<const SweepRecord> records, double noise_rel) {
  std::vector<std::pair<Family, int>> keys;
  std::map<std::size_t, std::vector<const SweepRecord*>> groups;
  for (const SweepRecord& rec : records) {
    if (!rec.ok()) continue;
    const auto key = std::make_pair(rec.family, rec.k);
    auto it = std::find(keys.begin(), keys.end(), key);
    if (it == keys.end()) {
      keys.push_back(key);
      it = keys.end() - 1;
    }
    groups[static_cast<std::size_t>(it - keys.begin())].push_back(&rec);
  }

  ConvergenceReport report;
  for (std::size_t g = 0; g < keys.size(); ++g) {
    auto& recs = groups[g];
    std::sort(recs.begin(), recs.end(),
              [](const SweepRecord* a, const SweepRecord* b) { return a->R < b->R; });
    recs.erase(std::unique(recs.begin(), recs.end(),
                           [](const SweepRecord* a, const SweepRecord* b) { return a->R == b->R; }),
               recs.end());
    const auto& [family, k] = keys[g];
    if (recs.size() < 2) {
      throw DomainError("convergence report for " + family.describe() + ", k=" +
                        std::to_string(k) + " needs at least two distinct R values");
    }

    ConvergenceRow row{family, k, {}, {}, recs.front()->target, std::nullopt, false, 0.0, false};
    const double floor = noise_rel * row.target;
    std::vector<double> xs;
    std::vector<double> ys;
    for (const SweepRecord* rec : recs) {
      row.R.push_back(rec->R);
      row.gaps.push_back(rec->gap);
      if (rec->gap > floor) {
        xs.push_back(std::log(rec->R));
        ys.push_back(std::log(rec->gap));
      }
    }
    if (xs.size() >= 2) {
      const double n = static_cast<double>(xs.size());
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
      }
      row.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    row.exact = xs.empty();

    const double r_max = row.R.back();
    row.tolerance = std::max(1e-6 * row.target, 5.0 * k * row.target * family.p() / r_max);
    row.pass = row.exact || (row.gaps.back() <= row.tolerance && (!row.slope || *row.slope <= -0.8));
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace pleig
