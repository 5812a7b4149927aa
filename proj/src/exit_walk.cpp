#include "fracbranch/exit_walk.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fracbranch/errors.hpp"

namespace fracbranch {
namespace {

double squared_norm(std::span<const double> x) {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return r2;
}

void check_start(std::span<const double> start, const WalkParams& params) {
  if (static_cast<int>(start.size()) != params.law.d)
    throw std::invalid_argument("walk: start point has dimension " + std::to_string(start.size()) +
                                ", expected " + std::to_string(params.law.d));
  if (!(squared_norm(start) < params.radius * params.radius))
    throw std::invalid_argument("walk: start point must lie strictly inside the ball");
}

}  // namespace

void WalkParams::validate() const {
  law.validate();
  if (!(radius > 0.0)) throw std::domain_error("walk: radius must be positive");
  if (!(step > 0.0)) throw std::domain_error("walk: time step must be positive");
  if (max_steps == 0) throw std::domain_error("walk: step cap must be positive");
  if (!(coarse_factor >= 0.0)) throw std::domain_error("walk: coarse factor must be non-negative");
}

Walker::Walker(const WalkParams& params) : params_(params) {
  params_.validate();
  const double h = params_.step;
  const double radius = params_.radius;
  levels_.push_back({1, radius * radius, StableIncrementSampler(params_.law, h)});
  if (params_.coarse_factor == 0.0) return;
  // Level j needs c D^alpha >= 2^j h, i.e. D >= (2^j h / c)^{1/alpha}.
  for (int j = 1; j < 48; ++j) {
    const std::uint64_t multiple = std::uint64_t{1} << j;
    const double span = static_cast<double>(multiple) * h;
    const double min_distance = std::pow(span / params_.coarse_factor, 1.0 / params_.law.alpha());
    const double max_r = radius - min_distance;
    if (max_r <= 0.0) break;
    levels_.push_back({multiple, max_r * max_r, StableIncrementSampler(params_.law, span)});
  }
}

std::size_t Walker::level_for(double r2) const {
  std::size_t j = levels_.size() - 1;
  while (j > 0 && r2 > levels_[j].max_r2) --j;
  return j;
}

WalkCause Walker::advance(std::span<double> position, double clock, RngStream& rng, double& duration) const {
  const double h = params_.step;
  const double r2_max = params_.radius * params_.radius;
  const std::size_t d = position.size();
  double increment_buffer[16];
  std::vector<double> heap_buffer;
  std::span<double> increment;
  if (d <= 16) {
    increment = std::span<double>(increment_buffer, d);
  } else {
    heap_buffer.resize(d);
    increment = heap_buffer;
  }
  auto move = [&](const StableIncrementSampler& sampler) {
    sampler.increment(rng, increment);
    double r2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      position[i] += increment[i];
      r2 += position[i] * position[i];
    }
    return r2;
  };

  // Grid index of the current time, and of the last grid time <= clock.
  const double last_index = std::isinf(clock) ? std::numeric_limits<double>::infinity() : std::floor(clock / h);
  double r2 = squared_norm(position);
  std::uint64_t index = 0;
  std::uint64_t steps = 0;
  for (;;) {
    std::size_t j = level_for(r2);
    // Shrink the step to stay on or before the last grid time; once even a
    // single h overshoots, finish with one partial step to the clock time.
    while (j > 0 && static_cast<double>(index + levels_[j].multiple) > last_index) --j;
    if (static_cast<double>(index + 1) > last_index) break;
    const Level* level = &levels_[j];
    if (steps >= params_.max_steps)
      throw LimitError("walk: exceeded the cap of " + std::to_string(params_.max_steps) + " steps");
    ++steps;
    index += level->multiple;
    r2 = move(level->sampler);
    if (r2 >= r2_max) {
      duration = static_cast<double>(index) * h;
      return WalkCause::BallExit;
    }
  }

  duration = clock;
  const double remainder = clock - static_cast<double>(index) * h;
  if (remainder > 0.0 && move(StableIncrementSampler(params_.law, remainder)) >= r2_max) return WalkCause::BallExit;
  return WalkCause::ClockRing;
}

WalkOutcome Walker::walk(std::span<const double> start, double clock, RngStream& rng) const {
  check_start(start, params_);
  if (!(clock > 0.0)) throw std::invalid_argument("walk: clock must be positive");
  WalkOutcome out;
  out.end_position.assign(start.begin(), start.end());
  out.cause = advance(out.end_position, clock, rng, out.duration);
  return out;
}

void Walker::free_path(std::span<double> position, double duration, RngStream& rng) const {
  if (!(duration > 0.0) || std::isinf(duration)) throw std::invalid_argument("free_path: duration must be positive and finite");
  const double h = params_.step;
  std::vector<double> increment(position.size());
  const auto full_steps = static_cast<std::uint64_t>(std::floor(duration / h));
  for (std::uint64_t k = 0; k < full_steps; ++k) {
    levels_[0].sampler.increment(rng, increment);
    for (std::size_t i = 0; i < position.size(); ++i) position[i] += increment[i];
  }
  const double remainder = duration - static_cast<double>(full_steps) * h;
  if (remainder > 0.0) {
    StableIncrementSampler(params_.law, remainder).increment(rng, increment);
    for (std::size_t i = 0; i < position.size(); ++i) position[i] += increment[i];
  }
}

WalkOutcome walk(std::span<const double> start, double clock, const WalkParams& params, RngStream& rng) {
  return Walker(params).walk(start, clock, rng);
}

namespace {

template <class Transform>
Estimate exit_time_functional(std::span<const double> start, const WalkParams& params, std::uint64_t n,
                              const RngStream& rng, unsigned workers, Transform&& transform) {
  if (n == 0) throw std::domain_error("sample count must be at least 1");
  const Walker walker(params);
  check_start(start, params);
  const std::vector<double> origin(start.begin(), start.end());
  return run_samples(n, rng, workers, [&](RngStream& stream) {
    std::vector<double> position = origin;
    double duration = 0.0;
    walker.advance(position, kNoClock, stream, duration);
    return SampleOutcome{transform(duration), false};
  });
}

}  // namespace

Estimate survival_factor(std::span<const double> start, const WalkParams& params, std::uint64_t n,
                         const RngStream& rng, unsigned workers) {
  return exit_time_functional(start, params, n, rng, workers, [](double tau) { return std::exp(-tau); });
}

Estimate mean_exit_time(std::span<const double> start, const WalkParams& params, std::uint64_t n,
                        const RngStream& rng, unsigned workers) {
  return exit_time_functional(start, params, n, rng, workers, [](double tau) { return tau; });
}

}  // namespace fracbranch
