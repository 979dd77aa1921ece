#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pleig/asymptotics.hpp"

namespace pleig {

inline constexpr std::string_view kSweepCsvHeader =
    "family,p,N,r,R,k,lambda,lower,upper,target,gap,q0,q1,qbar_minus,qbar_plus,status";

/// Shortest-exact decimal form: 17 significant digits, empty for NaN.
std::string format_real(double x);

/// Writes the header and one row per record. Floats use 17 significant
/// digits; missing values are empty fields. `comment`, if given, becomes a
/// leading "# ..." line, the only part of the output allowed to vary
/// between identical runs.
void write_sweep_csv(std::ostream& out, std::span<const SweepRecord> records,
                     const std::optional<std::string>& comment = std::nullopt);

/// Inverse of write_sweep_csv; skips '#' lines. Throws DomainError on a
/// malformed header or row.
std::vector<SweepRecord> read_sweep_csv(std::istream& in);

}  // namespace pleig
