#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "fracbranch/branching.hpp"
#include "fracbranch/estimate.hpp"
#include "fracbranch/exit_walk.hpp"

namespace fracbranch {

// Sufficient conditions for existence of a solution, obtained by dominating
// the branching process with a Galton-Watson tree whose offspring law does
// not depend on position.

/// C0 = max(|phi|_inf, sum_l |c_l|_inf). Sup norms of non-constant fields
/// are grid maxima (kSupNormGrid points).
double c0_constant(const ProblemSpec& spec);

/// Offspring law of the dominating tree, generating function
/// f(sigma) = sum_l q_l sigma^l.
struct DominatingPgf {
  std::map<int, double> probs;
  double delta = 0.0;

  void validate() const;
  double value(double sigma) const;
  double derivative(double sigma) const;
  int max_degree() const;  // largest degree with positive mass
};

/// q_0 = 1 - delta + delta |c_0| / S,  q_l = delta |c_l| / S  (l >= 1), with
/// S = sum_l |c_l|. An all-zero profile gives the point mass at 0.
DominatingPgf dominating_pgf(const std::map<int, double>& coefficient_norms, double delta);

struct GammaStar {
  /// Root of sigma f'(sigma) = f(sigma); +inf when none exists.
  double s_star = 0.0;
  /// 1 / f'(s*) = s*/f(s*), or lim sigma/f(sigma) when s* is infinite.
  double gamma = 0.0;
  /// Pure degree-1 law: the root equation is identically zero.
  bool degenerate = false;
};

/// Solves for s* by bracketing and bisection to full double precision.
GammaStar gamma_star(const DominatingPgf& pgf);

struct DeltaEstimate {
  double value = 0.0;
  double std_error = 0.0;
  double argmin_radius = 0.0;
  /// Survival factor E[exp(-tau_B)] per grid radius.
  std::vector<std::pair<double, Estimate>> grid;
};

inline constexpr int kDeltaGridPoints = 11;

/// delta = 1 - inf_x E[exp(-tau_B(x))], the infimum taken over the radii
/// i R / 11, i = 0..10, with n walks per radius.
DeltaEstimate estimate_delta(const ModelParams& model, const WalkParams& walk_params, std::uint64_t n,
                             const RngStream& rng, unsigned workers = 1);

enum class Verdict { SmallData, LpBound, Inconclusive };

const char* to_string(Verdict verdict);

struct ExistenceReport {
  double c0 = 0.0;
  double exterior_norm = 0.0;
  std::map<int, double> coefficient_norms;
  /// Unset in the small-data regime, where delta is not needed.
  std::optional<DeltaEstimate> delta;
  /// delta + 3 stderr (capped at 1); the value the verdict is based on.
  std::optional<double> delta_used;
  std::optional<GammaStar> gamma;
  /// Supremal p with C0 < gamma^{1/p}; set for LpBound when requested.
  std::optional<double> p_star;
  Verdict verdict = Verdict::Inconclusive;
};

/// Verdict from precomputed norms and a delta estimate.
ExistenceReport assess_existence(double exterior_norm, const std::map<int, double>& coefficient_norms,
                                 std::optional<DeltaEstimate> delta, bool p_search);

/// Full check: norms, delta by simulation when C0 > 1, then the verdict.
ExistenceReport check_existence(const ProblemSpec& spec, bool p_search, const WalkParams& walk_params,
                                std::uint64_t n, const RngStream& rng, unsigned workers = 1);

}  // namespace fracbranch
