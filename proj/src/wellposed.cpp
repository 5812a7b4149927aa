#include "fracbranch/wellposed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fracbranch {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::map<int, double> coefficient_norms(const ProblemSpec& spec) {
  std::map<int, double> norms;
  for (const auto& [degree, field] : spec.coefficients) norms[degree] = ball_sup_norm(field, spec.model);
  return norms;
}

double norm_sum(const std::map<int, double>& norms) {
  double total = 0.0;
  for (const auto& [degree, norm] : norms) total += norm;
  return total;
}

}  // namespace

double c0_constant(const ProblemSpec& spec) {
  return std::max(exterior_sup_norm(spec.exterior, spec.model), norm_sum(coefficient_norms(spec)));
}

void DominatingPgf::validate() const {
  if (!(delta >= 0.0 && delta <= 1.0)) throw std::invalid_argument("pgf: delta must lie in [0, 1]");
  double total = 0.0;
  for (const auto& [degree, q] : probs) {
    if (degree < 0) throw std::invalid_argument("pgf: negative degree");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("pgf: probabilities must lie in [0, 1]");
    total += q;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("pgf: probabilities sum to " + std::to_string(total));
}

double DominatingPgf::value(double sigma) const {
  double f = 0.0;
  for (const auto& [degree, q] : probs) f += q * std::pow(sigma, degree);
  return f;
}

double DominatingPgf::derivative(double sigma) const {
  double f = 0.0;
  for (const auto& [degree, q] : probs)
    if (degree > 0) f += degree * q * std::pow(sigma, degree - 1);
  return f;
}

int DominatingPgf::max_degree() const {
  int m = 0;
  for (const auto& [degree, q] : probs)
    if (q > 0.0) m = std::max(m, degree);
  return m;
}

DominatingPgf dominating_pgf(const std::map<int, double>& norms, double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw std::invalid_argument("dominating_pgf: delta must lie in [0, 1]");
  DominatingPgf pgf;
  pgf.delta = delta;
  const double total = norm_sum(norms);
  if (total == 0.0) {
    pgf.probs[0] = 1.0;
    return pgf;
  }
  pgf.probs[0] = 1.0 - delta;
  for (const auto& [degree, norm] : norms) pgf.probs[degree] += delta * norm / total;
  return pgf;
}

GammaStar gamma_star(const DominatingPgf& pgf) {
  pgf.validate();
  const int top = pgf.max_degree();
  if (top == 0) return {kInf, kInf, false};
  if (top == 1) {
    const double q1 = pgf.probs.at(1);
    if (q1 >= 1.0) return {kInf, 1.0, true};
    return {kInf, 1.0 / q1, false};
  }

  // g(sigma) = sigma f'(sigma) - f(sigma) = sum_l (l - 1) q_l sigma^l is
  // increasing on (0, inf) with g(0) = -q_0 and g -> inf.
  auto g = [&](double sigma) {
    double v = 0.0;
    for (const auto& [degree, q] : pgf.probs) v += (degree - 1) * q * std::pow(sigma, degree);
    return v;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (g(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw std::domain_error("gamma_star: failed to bracket the root");
  }
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (g(mid) < 0.0) lo = mid;
    else hi = mid;
  }
  const double root = std::abs(g(lo)) < std::abs(g(hi)) ? lo : hi;
  return {root, 1.0 / pgf.derivative(root), false};
}

DeltaEstimate estimate_delta(const ModelParams& model, const WalkParams& walk_params, std::uint64_t n,
                             const RngStream& rng, unsigned workers) {
  model.validate();
  if (n == 0) throw std::domain_error("estimate_delta: sample count must be at least 1");
  DeltaEstimate out;
  std::vector<double> x(static_cast<std::size_t>(model.d), 0.0);
  double lowest = kInf;
  for (int i = 0; i < kDeltaGridPoints; ++i) {
    const double r = model.radius * i / kDeltaGridPoints;
    x[0] = r;
    const Estimate e = survival_factor(x, walk_params, n, rng.substream(i * kPointStreamStride), workers);
    out.grid.emplace_back(r, e);
    if (e.mean < lowest) {
      lowest = e.mean;
      out.argmin_radius = r;
      out.std_error = e.std_error;
    }
  }
  out.value = std::clamp(1.0 - lowest, 0.0, 1.0);
  return out;
}

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::SmallData: return "SmallData";
    case Verdict::LpBound: return "LpBound";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

ExistenceReport assess_existence(double exterior_norm, const std::map<int, double>& norms,
                                 std::optional<DeltaEstimate> delta, bool p_search) {
  ExistenceReport report;
  report.exterior_norm = exterior_norm;
  report.coefficient_norms = norms;
  report.c0 = std::max(exterior_norm, norm_sum(norms));
  if (report.c0 <= 1.0) {
    report.verdict = Verdict::SmallData;
    return report;
  }
  if (!delta) throw std::invalid_argument("assess_existence: delta is required when C0 > 1");
  // A larger delta only lowers gamma, so the upper confidence bound is the
  // conservative choice.
  const double delta_used = std::min(1.0, delta->value + 3.0 * delta->std_error);
  report.delta = std::move(delta);
  report.delta_used = delta_used;
  const GammaStar gs = gamma_star(dominating_pgf(norms, delta_used));
  report.gamma = gs;
  if (gs.degenerate) {
    report.verdict = Verdict::Inconclusive;
  } else if (report.c0 < gs.gamma) {
    report.verdict = Verdict::LpBound;
    if (p_search) report.p_star = std::isinf(gs.gamma) ? kInf : std::log(gs.gamma) / std::log(report.c0);
  } else {
    report.verdict = Verdict::Inconclusive;
  }
  return report;
}

ExistenceReport check_existence(const ProblemSpec& spec, bool p_search, const WalkParams& walk_params,
                                std::uint64_t n, const RngStream& rng, unsigned workers) {
  spec.validate();
  const auto norms = coefficient_norms(spec);
  const double exterior_norm = exterior_sup_norm(spec.exterior, spec.model);
  std::optional<DeltaEstimate> delta;
  if (std::max(exterior_norm, norm_sum(norms)) > 1.0) delta = estimate_delta(spec.model, walk_params, n, rng, workers);
  return assess_existence(exterior_norm, norms, std::move(delta), p_search);
}

}  // namespace fracbranch
