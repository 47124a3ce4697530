// SPDX-License-Identifier: Apache-2.0
//
// Gromov-Wasserstein objective with the squared edge discrepancy
//
//   GW(gamma) = sum_{i,j,k,l} |dA_ij - dL_kl|^2 gamma_ik gamma_jl
//
// and its linearization M(gamma)_ik = sum_{j,l} |dA_ij - dL_kl|^2 gamma_jl,
// so that GW(gamma) = <M(gamma), gamma>.

#pragma once

#include "gmot/sinkhorn.hpp"
#include "gmot/types.hpp"

namespace gmot {

enum class GwKernel {
  kFast,   // dA^2 p 1^T + 1 (dL^2 q)^T - 2 dA gamma dL
  kNaive,  // quadruple loop, O(l_a^2 l_t^2)
};

/// Linearized cost for any nonnegative plan; the plan need not be a valid
/// coupling. The fast path uses the plan's own row and column sums, so both
/// paths agree for every input. Fast-path entries are clamped at 0 to absorb
/// rounding.
Matrix gw_linearized_cost(const Matrix& edges_a, const Matrix& edges_l, const Matrix& plan,
                          GwKernel kernel = GwKernel::kFast);

CostMatrix gw_linearized_cost(const CostMatrix& edges_a, const CostMatrix& edges_l,
                              const Coupling& coupling, GwKernel kernel = GwKernel::kFast);

/// GW(gamma), summed in difference form over pairs of support cells. This is
/// exactly zero whenever every pair of coupled cells has equal edge lengths,
/// e.g. a permutation coupling between isometric spaces.
double gw_objective(const CostMatrix& edges_a, const CostMatrix& edges_l, const Coupling& coupling);
double gw_objective(const Matrix& edges_a, const Matrix& edges_l, const Matrix& plan);

/// Starting plan for the Gromov solvers, per config.init.
Matrix initial_plan(const Marginal& a, const Marginal& b, const SolverConfig& config);

/// Monotone staircase coupling of a and b (north-west corner rule). For
/// l_a == l_t with uniform marginals this is the normalized identity.
Matrix staircase_plan(const Marginal& a, const Marginal& b);

struct GromovResult {
  Coupling coupling;
  SolveDiagnostics diagnostics;
  double objective = 0.0;  // GW at the final coupling
};

/// Entropic Gromov-Wasserstein (edge-only matching). Same iteration as
/// fgwd_solve with alpha fixed to 1; config.alpha is ignored.
GromovResult gwd_solve(const CostMatrix& edges_a, const CostMatrix& edges_l, const Marginal& a,
                       const Marginal& b, const SolverConfig& config);

}  // namespace gmot
