#pragma once

#include <map>
#include <optional>
#include <string_view>

#include "fracbranch/branching.hpp"
#include "fracbranch/special_functions.hpp"

namespace fracbranch {

/// Problems on B(0,1) with zero exterior data whose exact solution is
/// Phi_{k,s}:
///   Dirichlet  Delta_s u + Psi = 0             c0 = Psi,          c1 = 1
///   Linear     Delta_s u + Psi - Phi + u = 0   c0 = Psi - Phi,    c1 = 2
///   Quadratic  Delta_s u + Psi - Phi^2 + u^2 = 0
///                                              c0 = Psi - Phi^2,  c1 = 1, c2 = 1
/// Each is written in the form Delta_s u + f(x, u) = u.
enum class BenchmarkKind { Dirichlet, Linear, Quadratic };

std::string_view to_string(BenchmarkKind kind);

/// Builds the benchmark ProblemSpec (R = 1). Offspring probabilities default
/// to q_l proportional to |c_l|_inf.
ProblemSpec benchmark_problem(BenchmarkKind kind, const BenchmarkParams& params,
                              std::optional<std::map<int, double>> offspring_probs = std::nullopt);

}  // namespace fracbranch
