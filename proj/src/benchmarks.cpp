#include "fracbranch/benchmarks.hpp"

#include <cmath>

namespace fracbranch {

std::string_view to_string(BenchmarkKind kind) {
  switch (kind) {
    case BenchmarkKind::Dirichlet: return "dirichlet";
    case BenchmarkKind::Linear: return "linear";
    case BenchmarkKind::Quadratic: return "quadratic";
  }
  return "dirichlet";
}

ProblemSpec benchmark_problem(BenchmarkKind kind, const BenchmarkParams& params,
                              std::optional<std::map<int, double>> offspring_probs) {
  params.validate();
  const ModelParams model{params.d, params.s, 1.0};
  // Psi is only evaluated inside the ball, where the interior branch applies.
  auto psi = [params](double r) { return psi_source_radial(r, params); };
  auto phi = [params](double r) { return phi_exact_radial(r, params); };

  std::map<int, RadialField> coefficients;
  switch (kind) {
    case BenchmarkKind::Dirichlet:
      coefficients[0] = RadialField::radial(psi, "psi");
      coefficients[1] = RadialField::constant(1.0);
      break;
    case BenchmarkKind::Linear:
      coefficients[0] = RadialField::radial([psi, phi](double r) { return psi(r) - phi(r); }, "psi - phi");
      coefficients[1] = RadialField::constant(2.0);
      break;
    case BenchmarkKind::Quadratic:
      coefficients[0] = RadialField::radial(
          [psi, phi](double r) {
            const double p = phi(r);
            return psi(r) - p * p;
          },
          "psi - phi^2");
      coefficients[1] = RadialField::constant(1.0);
      coefficients[2] = RadialField::constant(1.0);
      break;
  }
  return make_problem(model, std::move(coefficients), RadialField::constant(0.0), std::move(offspring_probs));
}

}  // namespace fracbranch
