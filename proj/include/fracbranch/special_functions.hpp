#pragma once

#include <span>

namespace fracbranch {

/// Gamma function on the real line. Lanczos approximation for x >= 1/2,
/// reflection below. Throws std::domain_error at the poles 0, -1, -2, ...
double gamma(double x);

/// log|Gamma(x)| for x > 0.
double log_gamma(double x);

/// 1/Gamma(x); zero at the poles instead of throwing.
double reciprocal_gamma(double x);

struct HypergeometricArgs {
  double a = 0.0;
  double b = 0.0;
  double c = 1.0;
  double z = 0.0;
};

/// Gauss hypergeometric function 2F1(a, b; c; z) for real arguments.
///
/// Terminating (polynomial) cases, a or b a non-positive integer, are summed
/// exactly for any z. Otherwise |z| <= 1 is required: the power series is
/// used directly, z < 0 goes through the Pfaff transformation, z close to 1
/// through the 1 - z connection formula (when c - a - b is not an integer)
/// and z = 1 through Gauss's summation theorem.
///
/// Throws std::domain_error when c is a pole, |z| > 1 for a non-terminating
/// series, or the series fails to converge within the term cap.
double hyp2f1(const HypergeometricArgs& args);

/// Exponent k, stability s and dimension d of the (Phi, Psi) benchmark pair.
struct BenchmarkParams {
  int k = 0;
  double s = 0.5;
  int d = 1;

  /// Throws std::domain_error unless k >= 0, 0 < s < 1, d >= 1.
  void validate() const;
  /// Phi_{k,s} is Lipschitz continuous when k + s > 1. Informational only.
  bool lipschitz() const { return k + s > 1.0; }
};

/// Phi_{k,s}(x) = (1 - |x|^2)_+^{k+s}.
double phi_exact(std::span<const double> x, const BenchmarkParams& params);
double phi_exact_radial(double r, const BenchmarkParams& params);

/// Psi_{k,s}(x), the source term with fractional Laplacian of Phi_{k,s}
/// equal to -Psi_{k,s}. |x| <= 1 uses the terminating hypergeometric
/// polynomial; |x| > 1 the exterior branch with argument 1/|x|^2.
double psi_source(std::span<const double> x, const BenchmarkParams& params);
double psi_source_radial(double r, const BenchmarkParams& params);

}  // namespace fracbranch
