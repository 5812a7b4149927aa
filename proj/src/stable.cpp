#include "fracbranch/stable.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fracbranch {
namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;
// Angles this close to +-pi/2 are redrawn: cos(u)^{1/s} underflows there.
constexpr double kAngleGuard = 1e-12;

double draw_angle(RngStream& rng) {
  for (;;) {
    const double u = std::numbers::pi * (rng.uniform_open() - 0.5);
    if (std::abs(u + kHalfPi) >= kAngleGuard && std::abs(u - kHalfPi) >= kAngleGuard) return u;
  }
}

}  // namespace

void StableLaw::validate() const {
  if (!(s > 0.0 && s < 1.0)) throw std::domain_error("stable law: s must lie in (0, 1)");
  if (d < 1) throw std::domain_error("stable law: dimension must be at least 1");
}

double StableLaw::laplace_exponent(double lambda) const { return std::pow(2.0 * lambda, s); }

double cms_subordinator(double t, double s, double u, double e) {
  const double shifted = s * (u + kHalfPi);
  return 2.0 * std::pow(t, 1.0 / s) * std::sin(shifted) / std::pow(std::cos(u), 1.0 / s) *
         std::pow(std::cos(u - shifted) / e, -1.0 + 1.0 / s);
}

double sample_subordinator(double t, const StableLaw& law, RngStream& rng) {
  return StableIncrementSampler(law, t).subordinator(rng);
}

StableIncrementSampler::StableIncrementSampler(const StableLaw& law, double dt)
    : s_(law.s), d_(law.d), dt_(dt), inv_s_(1.0 / law.s), tail_exponent_(1.0 / law.s - 1.0),
      time_scale_(2.0 * std::pow(dt, 1.0 / law.s)) {
  law.validate();
  if (!(dt > 0.0)) throw std::domain_error("stable sampler: time span must be positive");
}

double StableIncrementSampler::subordinator(RngStream& rng) const {
  const double u = draw_angle(rng);
  const double e = rng.exponential();
  const double shifted = s_ * (u + kHalfPi);
  return time_scale_ * std::sin(shifted) / std::pow(std::cos(u), inv_s_) *
         std::pow(std::cos(u - shifted) / e, tail_exponent_);
}

void StableIncrementSampler::increment(RngStream& rng, std::span<double> out) const {
  const double scale = std::sqrt(subordinator(rng));
  for (double& v : out) v = scale * rng.normal();
}

std::vector<double> sample_stable_increment(double dt, const StableLaw& law, RngStream& rng) {
  std::vector<double> out(static_cast<std::size_t>(law.d));
  StableIncrementSampler(law, dt).increment(rng, out);
  return out;
}

double sample_exponential_clock(RngStream& rng) { return rng.exponential(); }

double exponential_from_uniform(double u) {
  if (!(u >= 0.0 && u < 1.0)) throw std::domain_error("exponential_from_uniform: u must lie in [0, 1)");
  return -std::log1p(-u);
}

}  // namespace fracbranch
