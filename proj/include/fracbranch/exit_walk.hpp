#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "fracbranch/estimate.hpp"
#include "fracbranch/rng.hpp"
#include "fracbranch/stable.hpp"

namespace fracbranch {

/// Ball radius, time step of the exit-detection grid, and the driving law.
struct WalkParams {
  double radius = 1.0;
  double step = 1e-3;
  StableLaw law{};
  /// Step cap; reaching it raises LimitError.
  std::uint64_t max_steps = 10'000'000;
  /// Boundary refinement. 0 samples every grid point. A positive value c
  /// lets a particle at distance D from the sphere take a single step of
  /// 2^j h, the largest such span not exceeding c D^{2s}; grid points in
  /// between are skipped. Near the sphere every grid point is still
  /// sampled, so h can be made much finer at modest cost.
  double coarse_factor = 0.0;

  void validate() const;
};

enum class WalkCause { ClockRing, BallExit };

struct WalkOutcome {
  double duration = 0.0;
  std::vector<double> end_position;
  WalkCause cause = WalkCause::ClockRing;
};

/// Clock value selecting walk-to-exit mode.
inline constexpr double kNoClock = std::numeric_limits<double>::infinity();

/// Simulates x + X_t on the grid 0, h, 2h, ... (plus the clock time itself)
/// until the position leaves B(0, R) or the clock rings, whichever is first.
/// Positions at sampled times have the exact stable law.
///
/// Exits are only detected at sampled times, so the path may leave and come
/// back unnoticed between grid points; this biases exit times upward by an
/// amount that shrinks with h. The reported exit position is the first
/// sampled point outside the ball, with no interpolation back to the sphere.
class Walker {
 public:
  explicit Walker(const WalkParams& params);

  const WalkParams& params() const noexcept { return params_; }

  /// `start` must lie strictly inside the ball and `clock` be positive
  /// (kNoClock for walk-to-exit); std::invalid_argument otherwise.
  WalkOutcome walk(std::span<const double> start, double clock, RngStream& rng) const;

  /// In-place variant used by the tree simulation; `position` is advanced
  /// to the terminal position and the terminal time is written to
  /// `duration`. Preconditions are not rechecked.
  WalkCause advance(std::span<double> position, double clock, RngStream& rng, double& duration) const;

  /// Moves `position` by the exact stable displacement over `duration`,
  /// sampled on the uniform grid with exit detection switched off.
  void free_path(std::span<double> position, double duration, RngStream& rng) const;

  /// Number of step sizes in use (1 without boundary refinement).
  std::size_t level_count() const noexcept { return levels_.size(); }

 private:
  struct Level {
    std::uint64_t multiple;  // step = multiple * h
    double max_r2;           // usable while |x|^2 <= max_r2
    StableIncrementSampler sampler;
  };

  std::size_t level_for(double r2) const;

  WalkParams params_;
  std::vector<Level> levels_;
};

WalkOutcome walk(std::span<const double> start, double clock, const WalkParams& params, RngStream& rng);

/// Monte-Carlo estimate of E[exp(-tau_B(start))] from n walk-to-exit paths;
/// path i uses rng.substream(i).
Estimate survival_factor(std::span<const double> start, const WalkParams& params, std::uint64_t n,
                         const RngStream& rng, unsigned workers = 1);

/// Monte-Carlo estimate of the mean exit time E[tau_B(start)].
Estimate mean_exit_time(std::span<const double> start, const WalkParams& params, std::uint64_t n,
                        const RngStream& rng, unsigned workers = 1);

}  // namespace fracbranch
