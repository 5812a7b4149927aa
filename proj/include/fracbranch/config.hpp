#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fracbranch {

enum class ProblemKind { Dirichlet, Linear, Quadratic, Custom };

/// Validated run configuration. JSON keys:
///
///   problem          "dirichlet" | "linear" | "quadratic" | "custom"   (required)
///   d                dimension >= 1                                   (required)
///   alpha | s        exactly one; alpha = 2s                         (required)
///   R                ball radius; benchmarks require 1               (default 1)
///   k                benchmark exponent >= 0                          (default 0)
///   coefficients     custom only: {"degree": constant, ...}
///   phi              custom only: "zero" or a constant
///   offspring_probs  optional {"degree": q, ...}
///   samples          trees (or walks) per grid point                  (default 10000)
///   h                exit-detection time step                         (default 1e-3)
///   coarse_factor    boundary refinement c >= 0; 0 = uniform grid     (default 0)
///   seed             64-bit seed                                      (default 0)
///   grid             radii in [0, R)                     (default 21 points on [0, 0.95 R])
///   max_generation   (default 50)      max_particles  (default 100000)
///   workers          0 = all cores                                    (default 0)
///   output           CSV path; empty writes to standard output
///
/// Benchmarks need alpha in (1, 2); custom problems accept (0, 2).
struct RunConfig {
  ProblemKind problem = ProblemKind::Dirichlet;
  int d = 1;
  double s = 0.875;
  double radius = 1.0;
  int k = 0;
  std::map<int, double> coefficients;
  double phi = 0.0;
  std::optional<std::map<int, double>> offspring_probs;
  std::uint64_t samples = 10000;
  double step = 1e-3;
  double coarse_factor = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> grid;
  int max_generation = 50;
  std::uint64_t max_particles = 100000;
  /// Resolved to the hardware thread count when the file gives 0 or omits it.
  unsigned workers = 0;
  std::string output;

  bool is_benchmark() const { return problem != ProblemKind::Custom; }
};

std::string_view to_string(ProblemKind kind);

/// Parses and validates a JSON document. Unknown keys and invariant
/// violations raise ConfigError naming the key.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::filesystem::path& path);

/// Re-checks a config after programmatic edits (e.g. flag overrides).
void validate_config(const RunConfig& config);

std::vector<double> default_grid(double radius);

}  // namespace fracbranch
