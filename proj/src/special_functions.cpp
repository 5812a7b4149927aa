#include "fracbranch/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fracbranch {
namespace {

// Lanczos approximation, g = 607/128, 15 terms (P. Godfrey's table).
constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczos = {
    0.99999999999999709182,     57.156235665862923517,      -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,    .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4,  .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,   -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4,  .36899182659531622704e-5,
};
constexpr double kHalfLog2Pi = 0.91893853320467274178;
constexpr double kSqrt2Pi = 2.5066282746310005024;

constexpr double kSeriesTolerance = 1e-16;
constexpr int kSeriesTermCap = 10000;
// 1 - z connection formula is used above this argument.
constexpr double kNearOne = 0.9;

double lanczos_sum(double x) {
  double sum = 0.0;
  for (std::size_t i = kLanczos.size() - 1; i > 0; --i) sum += kLanczos[i] / (x + static_cast<double>(i));
  return sum + kLanczos[0];
}

bool is_nonpositive_integer(double v) { return v <= 0.0 && v == std::floor(v); }

// sin(pi x) with exact argument reduction.
double sin_pi(double x) {
  double r = x - 2.0 * std::round(0.5 * x);  // [-1, 1], exact
  if (r > 0.5) r = 1.0 - r;
  else if (r < -0.5) r = -1.0 - r;
  return std::sin(std::numbers::pi * r);
}

double gamma_positive(double x) {
  // x >= 0.5
  const double tmp = x + kLanczosG + 0.5;
  const double half = std::pow(tmp, 0.5 * (x + 0.5));
  return kSqrt2Pi * half * (half * std::exp(-tmp)) * lanczos_sum(x) / x;
}

// b = -m. Extended precision: the polynomial can cancel to well below its
// largest term.
double terminating_sum(double a, int m, double c, double z) {
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int n = 0; n < m; ++n) {
    term *= (static_cast<long double>(a) + n) * (n - m) / ((static_cast<long double>(c) + n) * (n + 1)) * z;
    sum += term;
  }
  return static_cast<double>(sum);
}

double power_series(double a, double b, double c, double z) {
  double term = 1.0;
  double sum = 1.0;
  int small_terms = 0;
  for (int n = 0; n < kSeriesTermCap; ++n) {
    term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z;
    sum += term;
    if (std::abs(term) < kSeriesTolerance * std::abs(sum)) {
      if (++small_terms >= 2) return sum;
    } else {
      small_terms = 0;
    }
  }
  throw std::domain_error("hyp2f1: series did not converge within " + std::to_string(kSeriesTermCap) +
                          " terms (z = " + std::to_string(z) + ")");
}

double hyp2f1_impl(double a, double b, double c, double z) {
  if (is_nonpositive_integer(c)) throw std::domain_error("hyp2f1: c is zero or a negative integer");
  if (z == 0.0) return 1.0;
  if (is_nonpositive_integer(b)) return terminating_sum(a, static_cast<int>(-b), c, z);
  if (is_nonpositive_integer(a)) return terminating_sum(b, static_cast<int>(-a), c, z);
  if (!(std::abs(z) <= 1.0)) throw std::domain_error("hyp2f1: |z| > 1 outside the polynomial case");

  const double excess = c - a - b;
  if (z == 1.0) {
    if (excess <= 0.0) throw std::domain_error("hyp2f1: divergent at z = 1 (c - a - b <= 0)");
    return gamma(c) * gamma(excess) * reciprocal_gamma(c - a) * reciprocal_gamma(c - b);
  }
  if (z < 0.0) {
    // Pfaff: maps [-1, 0) onto (0, 1/2].
    return std::pow(1.0 - z, -a) * hyp2f1_impl(a, c - b, c, z / (z - 1.0));
  }
  const double distance_to_integer = std::abs(excess - std::round(excess));
  if (z > kNearOne && distance_to_integer > 1e-3) {
    const double w = 1.0 - z;
    const double first = gamma(c) * gamma(excess) * reciprocal_gamma(c - a) * reciprocal_gamma(c - b);
    const double second = gamma(c) * gamma(-excess) * reciprocal_gamma(a) * reciprocal_gamma(b);
    double total = 0.0;
    if (first != 0.0) total += first * hyp2f1_impl(a, b, 1.0 - excess, w);
    if (second != 0.0) total += second * std::pow(w, excess) * hyp2f1_impl(c - a, c - b, 1.0 + excess, w);
    return total;
  }
  return power_series(a, b, c, z);
}

}  // namespace

double gamma(double x) {
  if (std::isnan(x)) return x;
  if (is_nonpositive_integer(x)) throw std::domain_error("gamma: pole at " + std::to_string(x));
  if (x < 0.5) return std::numbers::pi / (sin_pi(x) * gamma_positive(1.0 - x));
  return gamma_positive(x);
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: requires x > 0");
  if (x < 0.5) return std::log(gamma(x));
  const double tmp = x + kLanczosG + 0.5;
  return (x + 0.5) * std::log(tmp) - tmp + kHalfLog2Pi + std::log(lanczos_sum(x) / x);
}

double reciprocal_gamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  if (x > 171.0) return 0.0;
  return 1.0 / gamma(x);
}

double hyp2f1(const HypergeometricArgs& args) { return hyp2f1_impl(args.a, args.b, args.c, args.z); }

void BenchmarkParams::validate() const {
  if (k < 0) throw std::domain_error("benchmark exponent k must be non-negative");
  if (!(s > 0.0 && s < 1.0)) throw std::domain_error("stability s must lie in (0, 1)");
  if (d < 1) throw std::domain_error("dimension d must be at least 1");
}

double phi_exact_radial(double r, const BenchmarkParams& params) {
  params.validate();
  const double r2 = r * r;
  if (r2 >= 1.0) return 0.0;
  return std::pow(1.0 - r2, params.k + params.s);
}

double phi_exact(std::span<const double> x, const BenchmarkParams& params) {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return phi_exact_radial(std::sqrt(r2), params);
}

namespace {

// Gamma(p1) Gamma(p2) / (Gamma(q1) Gamma(q2)) with positive arguments,
// through logs once the factors get large.
double gamma_ratio(double p1, double p2, double q1, double q2) {
  if (std::max({p1, p2, q1, q2}) < 100.0) return gamma(p1) * gamma(p2) / (gamma(q1) * gamma(q2));
  return std::exp(log_gamma(p1) + log_gamma(p2) - log_gamma(q1) - log_gamma(q2));
}

}  // namespace

double psi_source_radial(double r, const BenchmarkParams& params) {
  params.validate();
  const double s = params.s;
  const double k = params.k;
  const double half_d = 0.5 * params.d;
  const double r2 = r * r;
  if (r2 <= 1.0) {
    const double scale = std::pow(4.0, s) * gamma_ratio(s + half_d, k + 1.0 + s, k + 1.0, half_d);
    return scale * hyp2f1({half_d + s, -k, half_d, r2});
  }
  const double scale = std::pow(4.0, s) * gamma_ratio(s + half_d, k + 1.0 + s, k + 1.0 + s + half_d, 1.0) /
                       (gamma(-s) * std::pow(r, params.d + 2.0 * s));
  return scale * hyp2f1({half_d + s, 1.0 + s, k + 1.0 + half_d + s, 1.0 / r2});
}

double psi_source(std::span<const double> x, const BenchmarkParams& params) {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return psi_source_radial(std::sqrt(r2), params);
}

}  // namespace fracbranch
