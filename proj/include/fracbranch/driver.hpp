#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fracbranch/branching.hpp"
#include "fracbranch/config.hpp"
#include "fracbranch/exit_walk.hpp"
#include "fracbranch/wellposed.hpp"

namespace fracbranch {

struct ProfileRow {
  double radius = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
  double truncation_fraction = 0.0;
  /// Present for builtin benchmarks only; abs_error is set iff exact is.
  std::optional<double> exact;
  std::optional<double> abs_error;
};

struct ProfileResult {
  std::vector<ProfileRow> rows;
  double wall_seconds = 0.0;
  /// Single-sample run: every stderr is 0 by convention.
  bool degenerate_statistics = false;
};

inline constexpr const char* kCsvHeader = "radius,estimate,stderr,n,truncation_fraction,exact,abs_error";

ProblemSpec build_problem(const RunConfig& config);
WalkParams walk_params_for(const RunConfig& config);
TreeLimits limits_for(const RunConfig& config);

/// Radial profile of u for the configured problem.
ProfileResult run_profile(const RunConfig& config);

/// CSV text: header plus one line per row, '.' decimals, shortest
/// round-trip number formatting, empty fields for absent values.
std::string format_csv(const ProfileResult& result);

/// Writes the CSV through a temporary file renamed into place; nothing is
/// left at `path` (or beside it) if writing fails.
void write_csv(const ProfileResult& result, const std::filesystem::path& path);

/// "rows=21 max_abs_error=... wall_time=...s" plus a note for single-sample runs.
std::string summary_line(const ProfileResult& result);

/// Existence check for the configured problem; `samples` walks per delta
/// grid point.
ExistenceReport run_check(const RunConfig& config);

/// JSON object mirroring ExistenceReport. Infinite values are written as
/// the string "inf", absent ones as null.
std::string report_to_json(const ExistenceReport& report);

/// Locale-independent shortest round-trip formatting.
std::string format_number(double value);

}  // namespace fracbranch
