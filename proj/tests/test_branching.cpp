#include <doctest.h>

#include <cmath>
#include <deque>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fracbranch/benchmarks.hpp"
#include "fracbranch/branching.hpp"
#include "fracbranch/exit_walk.hpp"

using namespace fracbranch;

namespace {

// Replays a fixed sequence of clocks, walk outcomes and offspring choices.
class ScriptedDraws final : public TreeDraws {
 public:
  struct Step {
    WalkCause cause;
    std::vector<double> end;
  };

  std::deque<Step> walks;
  std::deque<std::size_t> choices;
  int clocks_drawn = 0;

  double clock() override {
    ++clocks_drawn;
    return 1.0;
  }
  WalkCause walk(std::span<double> position, double) override {
    REQUIRE_FALSE(walks.empty());
    Step step = walks.front();
    walks.pop_front();
    std::copy(step.end.begin(), step.end.end(), position.begin());
    return step.cause;
  }
  std::size_t offspring() override {
    REQUIRE_FALSE(choices.empty());
    const std::size_t c = choices.front();
    choices.pop_front();
    return c;
  }
};

ModelParams model_1d() { return {1, 0.875, 1.0}; }

WalkParams walk_for(const ModelParams& m, double h = 1e-3, double coarse = 0.0) {
  WalkParams p;
  p.radius = m.radius;
  p.step = h;
  p.law = m.law();
  p.coarse_factor = coarse;
  return p;
}

ProblemSpec three_degree_spec() {
  std::map<int, RadialField> c;
  c[0] = RadialField::constant(0.5);
  c[1] = RadialField::radial([](double r) { return 1.0 + r; }, "1+r");
  c[2] = RadialField::constant(2.0);
  return make_problem(model_1d(), std::move(c), RadialField::radial([](double r) { return r; }, "r"),
                      std::map<int, double>{{0, 0.2}, {1, 0.3}, {2, 0.5}});
}

// root dies at 0.125 with two children; the first dies at 0.25 with one child
// that exits at 1.5; the second dies at 0.5 without children.
ScriptedDraws fixed_topology() {
  ScriptedDraws d;
  d.walks = {{WalkCause::ClockRing, {0.125}},
             {WalkCause::ClockRing, {0.25}},
             {WalkCause::BallExit, {1.5}},
             {WalkCause::ClockRing, {-0.5}}};
  d.choices = {2, 1, 0};
  return d;
}

}  // namespace

TEST_CASE("product identity on a scripted tree") {
  const ProblemSpec spec = three_degree_spec();
  ScriptedDraws draws = fixed_topology();
  const std::vector<double> x{0.0};
  const TreeSample t = evaluate_tree(x, spec, TreeLimits{}, draws);
  const double expected = (2.0 / 0.5) * ((1.25 / 0.3) * 1.5) * (0.5 / 0.2);
  CHECK(t.h_value == expected);
  CHECK(t.particles == 4);
  CHECK(t.max_generation == 2);
  CHECK_FALSE(t.truncated);
  CHECK(draws.walks.empty());
  CHECK(draws.choices.empty());
  CHECK(draws.clocks_drawn == 4);
}

TEST_CASE("generation and particle limits truncate to zero") {
  const ProblemSpec spec = three_degree_spec();
  const std::vector<double> x{0.0};
  {
    ScriptedDraws draws = fixed_topology();
    const TreeSample t = evaluate_tree(x, spec, TreeLimits{1, 100}, draws);
    CHECK(t.truncated);
    CHECK(t.h_value == 0.0);
  }
  {
    ScriptedDraws draws = fixed_topology();
    const TreeSample t = evaluate_tree(x, spec, TreeLimits{50, 3}, draws);
    CHECK(t.truncated);
    CHECK(t.h_value == 0.0);
    CHECK(t.particles == 3);
  }
  {
    ScriptedDraws draws = fixed_topology();
    CHECK_FALSE(evaluate_tree(x, spec, TreeLimits{2, 4}, draws).truncated);
  }
}

TEST_CASE("a root that exits contributes phi at the exit point only") {
  const ProblemSpec spec = three_degree_spec();
  ScriptedDraws draws;
  draws.walks = {{WalkCause::BallExit, {-2.25}}};
  const std::vector<double> x{0.5};
  const TreeSample t = evaluate_tree(x, spec, TreeLimits{}, draws);
  CHECK(t.h_value == 2.25);
  CHECK(t.particles == 1);
  CHECK(t.max_generation == 0);
}

TEST_CASE("zero factors stop the recursion") {
  std::map<int, RadialField> c;
  c[0] = RadialField::constant(1.0);
  c[2] = RadialField::constant(1.0);
  const ProblemSpec spec = make_problem(model_1d(), std::move(c), RadialField::constant(0.0));
  ScriptedDraws draws;
  // first child exits (phi = 0), so the second is never simulated
  draws.walks = {{WalkCause::ClockRing, {0.0}}, {WalkCause::BallExit, {1.5}}};
  draws.choices = {1};
  const std::vector<double> x{0.0};
  const TreeSample t = evaluate_tree(x, spec, TreeLimits{}, draws);
  CHECK(t.h_value == 0.0);
  CHECK(t.particles == 2);
  CHECK_FALSE(t.truncated);
}

TEST_CASE("make_problem") {
  std::map<int, RadialField> c;
  c[0] = RadialField::constant(-0.3);
  c[1] = RadialField::constant(0.0);
  c[3] = RadialField::radial([](double r) { return 0.9 * (1.0 - r); });
  const ProblemSpec spec = make_problem(model_1d(), c, RadialField::constant(0.0));
  CHECK(spec.coefficients.size() == 2);
  CHECK_FALSE(spec.coefficients.contains(1));
  CHECK(spec.offspring_probs.at(0) == doctest::Approx(0.25));
  CHECK(spec.offspring_probs.at(3) == doctest::Approx(0.75));

  const ProblemSpec explicit_q =
      make_problem(model_1d(), c, RadialField::constant(0.0), std::map<int, double>{{0, 2.0}, {3, 6.0}});
  CHECK(explicit_q.offspring_probs.at(0) == doctest::Approx(0.25));

  CHECK_THROWS(make_problem(model_1d(), c, RadialField::constant(0.0), std::map<int, double>{{0, 1.0}}));
  CHECK_THROWS(make_problem(model_1d(), c, RadialField::constant(0.0), std::map<int, double>{{0, 1.0}, {3, 0.0}}));

  ProblemSpec bad = spec;
  bad.offspring_probs[0] = 0.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("sup norms") {
  const ModelParams m = model_1d();
  CHECK(ball_sup_norm(RadialField::constant(-2.5), m) == 2.5);
  CHECK(ball_sup_norm(RadialField::radial([](double r) { return r * r - 0.5; }), m) == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(exterior_sup_norm(RadialField::radial([](double r) { return 1.0 / r; }), m) == doctest::Approx(1.0));
}

TEST_CASE("sample_offspring") {
  SUBCASE("degenerate mass") {
    std::map<int, RadialField> c;
    c[2] = RadialField::constant(1.0);
    const ProblemSpec spec = make_problem(model_1d(), std::move(c), RadialField::constant(0.0));
    RngStream rng(1, 0);
    for (int i = 0; i < 1000; ++i) CHECK(sample_offspring(spec, rng) == 2);
  }
  SUBCASE("fair coin") {
    std::map<int, RadialField> c;
    c[0] = RadialField::constant(1.0);
    c[2] = RadialField::constant(1.0);
    const ProblemSpec spec = make_problem(model_1d(), std::move(c), RadialField::constant(0.0));
    RngStream rng(2, 0);
    const int n = 100'000;
    int zeros = 0;
    for (int i = 0; i < n; ++i) zeros += sample_offspring(spec, rng) == 0;
    CHECK(std::abs(zeros - n / 2.0) < 3.0 * std::sqrt(n * 0.25));
  }
  SUBCASE("multinomial chi-squared") {
    const ProblemSpec spec = three_degree_spec();
    RngStream rng(3, 0);
    const int n = 100'000;
    std::map<int, int> counts;
    for (int i = 0; i < n; ++i) ++counts[sample_offspring(spec, rng)];
    double chi2 = 0.0;
    for (auto [l, q] : spec.offspring_probs) chi2 += std::pow(counts[l] - n * q, 2) / (n * q);
    CHECK(chi2 < 9.210);  // 99th percentile, 2 degrees of freedom
  }
}

TEST_CASE("estimate_u degenerate cases") {
  const ModelParams m = model_1d();
  const WalkParams wp = walk_for(m);
  const std::vector<double> origin{0.0};

  SUBCASE("all-zero data") {
    const ProblemSpec spec = make_problem(m, {{0, RadialField::constant(0.0)}}, RadialField::constant(0.0));
    const Estimate e = estimate_u(origin, spec, wp, TreeLimits{}, 1000, RngStream(1, 0));
    CHECK(e.mean == 0.0);
    CHECK(e.std_error == 0.0);
  }
  SUBCASE("unit chain: L = {1}, c1 = 1, phi = 1") {
    const ProblemSpec spec = make_problem(m, {{1, RadialField::constant(1.0)}}, RadialField::constant(1.0));
    const Estimate e = estimate_u(origin, spec, wp, TreeLimits{50, 100'000}, 2000, RngStream(2, 0));
    CHECK(e.truncation_fraction < 1e-3);
    if (e.truncation_fraction == 0.0) {
      CHECK(e.mean == 1.0);
      CHECK(e.std_error == 0.0);
    }
  }
  SUBCASE("exterior points return phi exactly") {
    const ProblemSpec spec = make_problem(m, {{0, RadialField::constant(0.5)}},
                                          RadialField::radial([](double r) { return r * r; }));
    const std::vector<double> outside{-1.5};
    const Estimate e = estimate_u(outside, spec, wp, TreeLimits{}, 10, RngStream(3, 0));
    CHECK(e.mean == 2.25);
    CHECK(e.std_error == 0.0);
    CHECK(e.n == 0);
    const std::vector<double> on_sphere{1.0};
    CHECK(estimate_u(on_sphere, spec, wp, TreeLimits{}, 10, RngStream(3, 0)).mean == 1.0);
  }
  SUBCASE("argument errors") {
    const ProblemSpec spec = make_problem(m, {{0, RadialField::constant(0.5)}}, RadialField::constant(0.0));
    CHECK_THROWS_AS(estimate_u(origin, spec, wp, TreeLimits{}, 0, RngStream(4, 0)), std::domain_error);
    WalkParams other = wp;
    other.law.s = 0.6;
    CHECK_THROWS_AS(estimate_u(origin, spec, other, TreeLimits{}, 10, RngStream(4, 0)), std::invalid_argument);
  }
}

TEST_CASE("Feynman-Kac identities against the survival factor") {
  const ModelParams m = model_1d();
  const WalkParams wp = walk_for(m);
  const std::vector<double> x{0.3};
  const std::uint64_t n = 30'000;
  const Estimate survival = survival_factor(x, wp, n, RngStream(20, 0));

  const ProblemSpec exit_indicator =
      make_problem(m, {{0, RadialField::constant(0.0)}}, RadialField::constant(1.0), std::map<int, double>{{0, 1.0}});
  // make_problem drops the zero coefficient: L is empty and every interior death contributes 0
  const Estimate tree = estimate_u(x, exit_indicator, wp, TreeLimits{}, n, RngStream(21, 0));
  CHECK(std::abs(tree.mean - survival.mean) < 3.0 * std::hypot(tree.std_error, survival.std_error));

  const double kappa = 0.7;
  const ProblemSpec source = make_problem(m, {{0, RadialField::constant(kappa)}}, RadialField::constant(0.0));
  const Estimate u = estimate_u(x, source, wp, TreeLimits{}, n, RngStream(22, 0));
  CHECK(std::abs(u.mean - kappa * (1.0 - survival.mean)) < 3.0 * std::hypot(u.std_error, kappa * survival.std_error));
}

TEST_CASE("estimates do not depend on the worker count") {
  const ProblemSpec spec = benchmark_problem(BenchmarkKind::Quadratic, {0, 0.875, 1});
  const WalkParams wp = walk_for(spec.model);
  const std::vector<double> x{0.2};
  const Estimate a = estimate_u(x, spec, wp, TreeLimits{}, 9000, RngStream(5, 0), 1);
  const Estimate b = estimate_u(x, spec, wp, TreeLimits{}, 9000, RngStream(5, 0), 3);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  CHECK(a.truncation_fraction == b.truncation_fraction);
}

TEST_CASE("radial profile delegates to estimate_u") {
  const ProblemSpec spec = benchmark_problem(BenchmarkKind::Dirichlet, {0, 0.875, 1});
  const WalkParams wp = walk_for(spec.model);
  const std::vector<double> radii{0.0, 0.5};
  const RngStream rng(6, 0);
  const auto profile = radial_profile(spec, wp, TreeLimits{}, radii, 500, rng, 1,
                                      [](double r) { return phi_exact_radial(r, {0, 0.875, 1}); });
  REQUIRE(profile.size() == 2);
  const std::vector<double> origin{0.0}, half{0.5};
  CHECK(profile[0].estimate.mean == estimate_u(origin, spec, wp, TreeLimits{}, 500, rng).mean);
  CHECK(profile[1].estimate.mean ==
        estimate_u(half, spec, wp, TreeLimits{}, 500, rng.substream(kPointStreamStride)).mean);
  CHECK(profile[1].exact == doctest::Approx(std::pow(0.75, 0.875)));
}

TEST_CASE("benchmark coefficients") {
  const BenchmarkParams p{1, 0.875, 1};
  const std::vector<double> x{0.4};
  const double psi = psi_source(x, p), phi = phi_exact(x, p);

  const ProblemSpec dirichlet = benchmark_problem(BenchmarkKind::Dirichlet, p);
  CHECK(dirichlet.coefficients.at(0)(x) == doctest::Approx(psi));
  CHECK(dirichlet.coefficients.at(1)(x) == 1.0);
  CHECK(dirichlet.exterior(std::vector<double>{1.5}) == 0.0);

  const ProblemSpec linear = benchmark_problem(BenchmarkKind::Linear, p);
  CHECK(linear.coefficients.at(0)(x) == doctest::Approx(psi - phi));
  CHECK(linear.coefficients.at(1)(x) == 2.0);

  const ProblemSpec quadratic = benchmark_problem(BenchmarkKind::Quadratic, p);
  CHECK(quadratic.coefficients.at(0)(x) == doctest::Approx(psi - phi * phi));
  CHECK(quadratic.coefficients.at(1)(x) == 1.0);
  CHECK(quadratic.coefficients.at(2)(x) == 1.0);

  double total = 0.0;
  for (auto [l, q] : quadratic.offspring_probs) total += q;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  const double norm0 = ball_sup_norm(quadratic.coefficients.at(0), quadratic.model);
  CHECK(quadratic.offspring_probs.at(0) == doctest::Approx(norm0 / (norm0 + 2.0)));
}

TEST_CASE("Dirichlet k = 1 profile is close to (1 - r^2)^1.875 and non-increasing") {
  const BenchmarkParams p{1, 0.875, 1};
  const ProblemSpec spec = benchmark_problem(BenchmarkKind::Dirichlet, p);
  const WalkParams wp = walk_for(spec.model, 1e-5, 0.02);
  const std::vector<double> radii{0.0, 0.25, 0.5, 0.75};
  const auto profile = radial_profile(spec, wp, TreeLimits{}, radii, 20'000, RngStream(7, 0), 0,
                                      [&](double r) { return phi_exact_radial(r, p); });
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const auto& pt = profile[i];
    INFO("r = " << pt.radius << " estimate " << pt.estimate.mean << " +- " << pt.estimate.std_error);
    CHECK(std::abs(pt.estimate.mean - *pt.exact) < 3.0 * pt.estimate.std_error + 0.02);
    CHECK(pt.estimate.truncation_fraction == 0.0);
    if (i > 0) {
      const auto& prev = profile[i - 1].estimate;
      CHECK(pt.estimate.mean - prev.mean < 3.0 * std::hypot(pt.estimate.std_error, prev.std_error));
    }
  }
}
