#include "fracbranch/selftest.hpp"

#include <cmath>
#include <cstdio>

#include "fracbranch/rng.hpp"
#include "fracbranch/special_functions.hpp"
#include "fracbranch/stable.hpp"
#include "fracbranch/wellposed.hpp"

namespace fracbranch {
namespace {

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buffer[160];
  std::snprintf(buffer, sizeof buffer, pattern, a, b);
  return buffer;
}

SelftestCheck gamma_recurrence() {
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double x = 0.1 + (20.0 - 0.1) * (i + 0.5) / 1000.0;
    worst = std::max(worst, std::abs(gamma(x + 1.0) - x * gamma(x)) / std::abs(gamma(x + 1.0)));
  }
  return {"gamma recurrence", worst <= 1e-12, fmt("max relative residual %.3g", worst)};
}

SelftestCheck terminating_hypergeometric(std::uint64_t seed) {
  RngStream rng(seed, 1);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int k = static_cast<int>(rng.next_u64() % 9);
    const double a = 0.1 + 5.0 * rng.uniform();
    const double c = 0.1 + 5.0 * rng.uniform();
    const double z = rng.uniform();
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int n = 0; n < k; ++n) {
      term *= (static_cast<long double>(a) + n) * (-k + n) / ((static_cast<long double>(c) + n) * (n + 1)) * z;
      sum += term;
    }
    const double got = hyp2f1({a, -static_cast<double>(k), c, z});
    const double scale = std::max(1e-300, static_cast<double>(std::fabs(sum)));
    worst = std::max(worst, static_cast<double>(std::fabs(static_cast<long double>(got) - sum)) / scale);
  }
  return {"terminating 2F1 vs direct sum", worst <= 1e-13, fmt("max relative error %.3g", worst)};
}

SelftestCheck cms_substitution() {
  const double v = cms_subordinator(1.0, 0.5, 0.0, 1.0);
  return {"CMS map at U=0, E=1, s=1/2", std::abs(v - 1.0) < 1e-15, fmt("value %.17g", v)};
}

SelftestCheck subordinator_laplace(std::uint64_t seed) {
  const StableLaw law{0.875, 1};
  const StableIncrementSampler sampler(law, 1.0);
  RngStream rng(seed, 2);
  const int n = 200000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = std::exp(-sampler.subordinator(rng));
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum_sq / n - mean * mean) / (n - 1));
  const double expected = std::exp(-law.laplace_exponent(1.0));
  const double z = std::abs(mean - expected) / se;
  return {"subordinator Laplace transform (s=0.875, lambda=1)", z < 4.0, fmt("|z| = %.3g, mean %.6g", z, mean)};
}

SelftestCheck exponential_clock(std::uint64_t seed) {
  RngStream rng(seed, 3);
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += sample_exponential_clock(rng);
  const double mean = sum / n;
  const double z = std::abs(mean - 1.0) * std::sqrt(static_cast<double>(n));
  return {"Exp(1) clock mean", z < 4.0, fmt("|z| = %.3g, mean %.6g", z, mean)};
}

SelftestCheck gamma_star_algebra() {
  DominatingPgf half;
  half.probs = {{0, 0.5}, {2, 0.5}};
  DominatingPgf skewed;
  skewed.probs = {{0, 0.9}, {2, 0.1}};
  const GammaStar a = gamma_star(half);
  const GammaStar b = gamma_star(skewed);
  const bool ok = std::abs(a.s_star - 1.0) < 1e-12 && std::abs(a.gamma - 1.0) < 1e-12 &&
                  std::abs(b.s_star - 3.0) < 1e-12 && std::abs(b.gamma - 5.0 / 3.0) < 1e-12;
  return {"s* and gamma(s*) closed forms", ok, fmt("gamma = %.17g, %.17g", a.gamma, b.gamma)};
}

}  // namespace

std::vector<SelftestCheck> run_selftest(std::uint64_t seed) {
  return {gamma_recurrence(),      terminating_hypergeometric(seed), cms_substitution(),
          subordinator_laplace(seed), exponential_clock(seed),       gamma_star_algebra()};
}

}  // namespace fracbranch
