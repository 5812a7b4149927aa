#pragma once

#include <span>
#include <vector>

#include "fracbranch/rng.hpp"

namespace fracbranch {

/// s-stable subordinator with Laplace exponent (2 lambda)^s, driving the
/// symmetric (2s)-stable process X_t = B_{S_t} in dimension d.
struct StableLaw {
  double s = 0.875;
  int d = 1;

  /// Throws std::domain_error unless 0 < s < 1 and d >= 1.
  void validate() const;
  double alpha() const { return 2.0 * s; }
  /// eta(lambda) = (2 lambda)^s, so E[exp(-lambda S_t)] = exp(-t eta(lambda)).
  double laplace_exponent(double lambda) const;
};

/// Chambers-Mallows-Stuck map for the subordinator at time t from a uniform
/// angle u in (-pi/2, pi/2) and a unit exponential e. Deterministic; exposed
/// for testing the formula itself.
double cms_subordinator(double t, double s, double u, double e);

/// One draw of S_t. Throws std::domain_error for t <= 0.
double sample_subordinator(double t, const StableLaw& law, RngStream& rng);

/// Draws symmetric (2s)-stable increments of a fixed span. Constants of the
/// CMS map are computed once, which matters in the walk's inner loop.
class StableIncrementSampler {
 public:
  StableIncrementSampler(const StableLaw& law, double dt);

  double dt() const noexcept { return dt_; }
  int dimension() const noexcept { return d_; }

  /// S_dt by the CMS formula.
  double subordinator(RngStream& rng) const;
  /// Writes G * sqrt(S_dt) into out (size d), G standard Gaussian.
  void increment(RngStream& rng, std::span<double> out) const;

 private:
  double s_;
  int d_;
  double dt_;
  double inv_s_;
  double tail_exponent_;  // 1/s - 1
  double time_scale_;     // 2 dt^{1/s}
};

/// One symmetric (2s)-stable increment over span dt. Throws
/// std::domain_error for dt <= 0.
std::vector<double> sample_stable_increment(double dt, const StableLaw& law, RngStream& rng);

/// Exp(1) lifetime of a particle.
double sample_exponential_clock(RngStream& rng);

/// Inverse CDF of Exp(1): -log(1 - u).
double exponential_from_uniform(double u);

}  // namespace fracbranch
