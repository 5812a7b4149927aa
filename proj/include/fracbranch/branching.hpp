#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fracbranch/estimate.hpp"
#include "fracbranch/exit_walk.hpp"
#include "fracbranch/rng.hpp"

namespace fracbranch {

/// Dimension, stability and ball radius of the problem.
struct ModelParams {
  int d = 1;
  double s = 0.875;
  double radius = 1.0;

  void validate() const;
  StableLaw law() const { return {s, d}; }
};

/// Grid resolution used for sup-norms of non-constant fields.
inline constexpr int kSupNormGrid = 10000;

/// Real function on R^d depending on |x| only: a constant or a radial
/// profile r -> g(r).
class RadialField {
 public:
  RadialField() = default;
  static RadialField constant(double value);
  static RadialField radial(std::function<double(double)> profile, std::string label = "radial");

  double at_radius(double r) const { return profile_ ? profile_(r) : value_; }
  double operator()(std::span<const double> x) const;

  std::optional<double> constant_value() const;
  const std::string& label() const noexcept { return label_; }

  /// max |g(r)| over r in [r_lo, r_hi]; exact for constants, otherwise
  /// the maximum over a uniform grid of `grid` points.
  double sup_norm(double r_lo, double r_hi, int grid = kSupNormGrid) const;

 private:
  double value_ = 0.0;
  std::function<double(double)> profile_;
  std::string label_ = "0";
};

/// Data of  Delta_s u + sum_l c_l(x) u^l = u  in B(0,R),  u = phi outside.
struct ProblemSpec {
  ModelParams model;
  /// Degree l -> c_l. The key set is the degree set L.
  std::map<int, RadialField> coefficients;
  RadialField exterior = RadialField::constant(0.0);
  /// Degree l -> q_l, same key set as `coefficients`.
  std::map<int, double> offspring_probs;

  /// Throws std::invalid_argument on a mismatched key set, a non-positive
  /// q_l, probabilities not summing to one, or a negative degree.
  void validate() const;
};

/// sup over the ball of |c| (grid over radii in [0, R)).
double ball_sup_norm(const RadialField& field, const ModelParams& model);
/// sup over the exterior of |phi|. Radial profiles are scanned on
/// [R, 8R]; constants are exact.
double exterior_sup_norm(const RadialField& field, const ModelParams& model);

/// Builds a ProblemSpec. Degrees whose coefficient vanishes identically (sup
/// norm 0) are dropped from L. Without explicit probabilities q_l is taken
/// proportional to |c_l|_inf.
ProblemSpec make_problem(const ModelParams& model, std::map<int, RadialField> coefficients, RadialField exterior,
                         std::optional<std::map<int, double>> offspring_probs = std::nullopt);

/// Draws a degree l with probability q_l.
int sample_offspring(const ProblemSpec& spec, RngStream& rng);

struct TreeLimits {
  /// Deepest generation simulated; the root is generation 0.
  int max_generation = 50;
  std::uint64_t max_particles = 100'000;
};

struct TreeSample {
  double h_value = 0.0;
  /// Particles actually simulated. Subtrees are skipped once the running
  /// product is exactly zero, since they cannot change the value.
  std::uint64_t particles = 0;
  int max_generation = 0;
  bool truncated = false;
};

/// Random source of the tree recursion. Production code draws from an
/// RngStream; tests script the draws to pin a topology.
class TreeDraws {
 public:
  virtual ~TreeDraws() = default;
  virtual double clock() = 0;
  /// Advances `position` in place until clock ring or ball exit.
  virtual WalkCause walk(std::span<double> position, double clock) = 0;
  /// Index into ProblemSpec::offspring_probs (ascending degree order).
  virtual std::size_t offspring() = 0;
};

/// Evaluates H(T_x) for one tree driven by `draws`. The clock law is
/// Exp(1), so time weights cancel and
///   H = prod_{interior deaths} c_l(X)/q_l * prod_{exits} phi(X).
/// Hitting a limit marks the sample truncated and gives it the value 0.
TreeSample evaluate_tree(std::span<const double> x, const ProblemSpec& spec, const TreeLimits& limits,
                         TreeDraws& draws);

/// One tree rooted at x (|x| < R) with stable walks and Exp(1) clocks.
TreeSample simulate_tree(std::span<const double> x, const ProblemSpec& spec, const WalkParams& walk_params,
                         const TreeLimits& limits, RngStream& rng);

/// Mean and standard error of n independent trees; tree i uses
/// rng.substream(i). For |x| >= R returns phi(x) exactly (n reported as 0).
Estimate estimate_u(std::span<const double> x, const ProblemSpec& spec, const WalkParams& walk_params,
                    const TreeLimits& limits, std::uint64_t n, const RngStream& rng, unsigned workers = 1);

struct ProfilePoint {
  double radius = 0.0;
  Estimate estimate;
  std::optional<double> exact;
};

/// Stream-id stride between radial grid points.
inline constexpr std::uint64_t kPointStreamStride = std::uint64_t{1} << 40;

/// estimate_u at x = (r, 0, ..., 0) for each radius; point i draws from
/// rng.substream(i * kPointStreamStride). `exact`, when given, fills the
/// reference column.
std::vector<ProfilePoint> radial_profile(const ProblemSpec& spec, const WalkParams& walk_params,
                                         const TreeLimits& limits, std::span<const double> radii,
                                         std::uint64_t n, const RngStream& rng, unsigned workers = 1,
                                         const std::function<double(double)>& exact = {});

}  // namespace fracbranch
