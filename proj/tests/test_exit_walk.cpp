#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fracbranch/errors.hpp"
#include "fracbranch/exit_walk.hpp"
#include "oracles.hpp"

using namespace fracbranch;

namespace {

WalkParams params_1d(double h = 1e-3, double radius = 1.0) {
  WalkParams p;
  p.radius = radius;
  p.step = h;
  p.law = {0.875, 1};
  return p;
}

double norm(const std::vector<double>& x) {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return std::sqrt(r2);
}

}  // namespace

TEST_CASE("walk parameter validation") {
  WalkParams p = params_1d();
  p.step = 0.0;
  CHECK_THROWS_AS(Walker{p}, std::domain_error);
  p = params_1d();
  p.radius = -1.0;
  CHECK_THROWS_AS(Walker{p}, std::domain_error);
  p = params_1d();
  p.coarse_factor = -0.1;
  CHECK_THROWS_AS(Walker{p}, std::domain_error);
}

TEST_CASE("walk preconditions") {
  const Walker walker(params_1d());
  RngStream rng(1, 0);
  const std::vector<double> outside{1.0}, inside{0.2}, wrong_dim{0.1, 0.1};
  CHECK_THROWS_AS(walker.walk(outside, 1.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(walker.walk(wrong_dim, 1.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(walker.walk(inside, 0.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(walker.walk(inside, -1.0, rng), std::invalid_argument);
}

TEST_CASE("outcome invariants over 1e5 random walks") {
  for (double c : {0.0, 0.02}) {
    WalkParams p = params_1d(1e-3);
    p.law = {0.75, 2};
    p.coarse_factor = c;
    const Walker walker(p);
    RngStream rng(10, 0);
    int exits = 0;
    for (int i = 0; i < 100'000; ++i) {
      const std::vector<double> start{0.9 * rng.uniform() - 0.45, 0.9 * rng.uniform() - 0.45};
      const double clock = rng.exponential();
      const WalkOutcome out = walker.walk(start, clock, rng);
      const double r = norm(out.end_position);
      if (out.cause == WalkCause::BallExit) {
        ++exits;
        if (!(r >= 1.0 && out.duration <= clock && out.duration > 0.0)) {
          FAIL("exit outcome violates invariants: r=" << r << " duration=" << out.duration << " clock=" << clock);
        }
        // exits are only detected on the grid or at the clock time
        const double k = out.duration / p.step;
        if (out.duration != clock && std::abs(k - std::round(k)) > 1e-6)
          FAIL("exit time off the grid: " << out.duration);
      } else if (!(r < 1.0 && out.duration == clock)) {
        FAIL("clock outcome violates invariants: r=" << r << " duration=" << out.duration);
      }
    }
    CHECK(exits > 10'000);
    CHECK(exits < 90'000);
  }
}

TEST_CASE("tiny clock leaves the particle in place") {
  const Walker walker(params_1d());
  RngStream rng(2, 0);
  for (int i = 0; i < 100; ++i) {
    const std::vector<double> start{0.3};
    const WalkOutcome out = walker.walk(start, 1e-12, rng);
    CHECK(out.cause == WalkCause::ClockRing);
    CHECK(out.duration == 1e-12);
    // |X_t| ~ t^{1/(2s)} = 1e-12^{0.571}, about 1.4e-7
    CHECK(std::abs(out.end_position[0] - 0.3) < 1e-4);
  }
}

TEST_CASE("the clock step lands exactly on the clock time") {
  const Walker walker(params_1d(0.1));
  RngStream rng(3, 0);
  const std::vector<double> start{0.0};
  // 0.35 = 3 full steps + a partial step of 0.05
  int clock_rings = 0;
  for (int i = 0; i < 1000; ++i) {
    const WalkOutcome out = walker.walk(start, 0.35, rng);
    if (out.cause == WalkCause::ClockRing) {
      ++clock_rings;
      CHECK(out.duration == 0.35);
    } else {
      CHECK(out.duration <= 0.35);
    }
  }
  CHECK(clock_rings > 0);
}

TEST_CASE("free path has the exact stable law at its end point") {
  const Walker walker(params_1d(0.05));
  RngStream rng(4, 0);
  MomentAccumulator cf;
  for (int i = 0; i < 200'000; ++i) {
    double x = 0.0;
    walker.free_path({&x, 1}, 0.37, rng);  // 7 steps + partial
    cf.add({std::cos(x), false});
  }
  const Estimate e = cf.estimate();
  CHECK(std::abs(e.mean - std::exp(-0.37)) < 3.0 * e.std_error);
}

TEST_CASE("step cap raises LimitError") {
  WalkParams p = params_1d(1e-6);
  p.max_steps = 1000;
  const Walker walker(p);
  RngStream rng(5, 0);
  const std::vector<double> start{0.0};
  CHECK_THROWS_AS(walker.walk(start, kNoClock, rng), LimitError);
}

TEST_CASE("boundary refinement levels") {
  WalkParams p = params_1d(1e-5);
  CHECK(Walker(p).level_count() == 1);
  p.coarse_factor = 0.02;
  const Walker refined(p);
  // 2^j h <= c R^alpha  for j up to log2(2000)
  CHECK(refined.level_count() == 11);
}

TEST_CASE("survival factor range and small balls") {
  const std::vector<double> origin{0.0};
  const Estimate big = survival_factor(origin, params_1d(1e-3), 2000, RngStream(6, 0));
  CHECK(big.mean > 0.0);
  CHECK(big.mean < 1.0);
  CHECK(big.n == 2000);
  const Estimate tiny = survival_factor(origin, params_1d(1e-6, 0.01), 2000, RngStream(6, 1));
  CHECK(tiny.mean > 0.99);
  CHECK(tiny.mean <= 1.0);
  CHECK_THROWS_AS(survival_factor(origin, params_1d(), 0, RngStream(6, 2)), std::domain_error);
}

TEST_CASE("mean exit time from the centre") {
  // Exit detection on the grid biases tau upward; refining near the sphere
  // with h = 1e-5 leaves a bias well below 0.01.
  WalkParams p = params_1d(1e-5);
  p.coarse_factor = 0.02;
  const std::vector<double> origin{0.0};
  const Estimate e = mean_exit_time(origin, p, 40'000, RngStream(7, 0));
  CHECK(e.mean > oracle::kMeanExitD1 - 3.0 * e.std_error);
  CHECK(e.mean < oracle::kMeanExitD1 + 3.0 * e.std_error + 0.01);

  // off-centre: E tau scales with (1 - |x|^2)^s
  const std::vector<double> start{0.6};
  const Estimate off = mean_exit_time(start, p, 40'000, RngStream(7, 1));
  const double expected = oracle::kMeanExitD1 * std::pow(1.0 - 0.36, 0.875);
  CHECK(off.mean > expected - 3.0 * off.std_error);
  CHECK(off.mean < expected + 3.0 * off.std_error + 0.01);
}

TEST_CASE("survival factor increases towards the sphere") {
  WalkParams p = params_1d(1e-4);
  p.coarse_factor = 0.02;
  double previous = 0.0;
  double previous_se = 0.0;
  int point = 0;
  for (double r : {0.0, 0.25, 0.5, 0.75, 0.999}) {
    const std::vector<double> start{r};
    const Estimate e = survival_factor(start, p, 100'000, RngStream(8, point++));
    INFO("r = " << r);
    CHECK(e.mean > previous - 3.0 * std::hypot(e.std_error, previous_se));
    previous = e.mean;
    previous_se = e.std_error;
  }
  CHECK(previous > 0.9);
}

TEST_CASE("exit before the clock is likelier near the sphere") {
  const Walker walker(params_1d());
  RngStream rng(9, 0);
  int centre = 0, edge = 0;
  const std::vector<double> at_centre{0.0}, at_edge{0.999};
  for (int i = 0; i < 20'000; ++i) {
    centre += walker.walk(at_centre, rng.exponential(), rng).cause == WalkCause::BallExit;
    edge += walker.walk(at_edge, rng.exponential(), rng).cause == WalkCause::BallExit;
  }
  CHECK(edge > centre);
  CHECK(edge > 19'000);
}

TEST_CASE("walk estimates are worker-count independent") {
  WalkParams p = params_1d(1e-3);
  const std::vector<double> start{0.4};
  const Estimate a = survival_factor(start, p, 10'000, RngStream(12, 0), 1);
  const Estimate b = survival_factor(start, p, 10'000, RngStream(12, 0), 4);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
}
