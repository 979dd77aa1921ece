#include "pleig/sweep_csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "pleig/errors.hpp"

namespace pleig {

std::string format_real(double x) {
  if (std::isnan(x)) return {};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRecord> records,
                     const std::optional<std::string>& comment) {
  if (comment) out << "# " << *comment << '\n';
  out << kSweepCsvHeader << '\n';
  for (const SweepRecord& r : records) {
    out << r.family.tag() << ',' << format_real(r.family.p()) << ',' << r.family.N() << ',';
    if (r.family.r()) out << *r.family.r();
    out << ',' << format_real(r.R) << ',' << r.k;
    for (double v : {r.lambda, r.lower, r.upper, r.target, r.gap, r.q0, r.q1, r.qbar_minus,
                     r.qbar_plus}) {
      out << ',' << format_real(v);
    }
    out << ',' << r.status << '\n';
  }
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_real(const std::string& s, std::size_t line_no) {
  if (s.empty()) return NAN;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw DomainError("line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
  return v;
}

int parse_int(const std::string& s, std::size_t line_no) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw DomainError("line " + std::to_string(line_no) + ": bad integer '" + s + "'");
  }
  return v;
}

Family parse_family(const std::vector<std::string>& f, std::size_t line_no) {
  if (f[0] == "pn") return Family::p_equals_n(parse_int(f[2], line_no));
  if (f[0] == "p2") return Family::p2_subcritical(parse_int(f[2], line_no));
  if (f[0] == "rfam") return Family::r_family(parse_int(f[3], line_no));
  throw DomainError("line " + std::to_string(line_no) + ": unknown family '" + f[0] + "'");
}

}  // namespace

std::vector<SweepRecord> read_sweep_csv(std::istream& in) {
  std::vector<SweepRecord> records;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kSweepCsvHeader) throw DomainError("unexpected sweep CSV header: " + line);
      header_seen = true;
      continue;
    }
    // Statuses never contain commas; run_sweep strips them from messages.
    const auto f = split(line);
    if (f.size() != 16) {
      throw DomainError("line " + std::to_string(line_no) + ": expected 16 fields, got " +
                        std::to_string(f.size()));
    }
    SweepRecord r{parse_family(f, line_no),
                  parse_real(f[4], line_no),
                  parse_int(f[5], line_no),
                  parse_real(f[6], line_no),
                  parse_real(f[7], line_no),
                  parse_real(f[8], line_no),
                  parse_real(f[9], line_no),
                  parse_real(f[10], line_no),
                  parse_real(f[11], line_no),
                  parse_real(f[12], line_no),
                  parse_real(f[13], line_no),
                  parse_real(f[14], line_no),
                  f[15]};
    records.push_back(std::move(r));
  }
  if (!header_seen) throw DomainError("sweep CSV has no header");
  return records;
}

}  // namespace pleig
