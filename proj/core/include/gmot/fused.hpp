// SPDX-License-Identifier: Apache-2.0
//
// Fused Gromov-Wasserstein alignment: a convex combination of the node
// transport cost and the Gromov-Wasserstein edge cost,
//
//   L(gamma) = (1 - alpha) <D_AL, gamma> + alpha GW(gamma),
//
// minimized by repeatedly solving an entropic transport problem on the
// linearized fused cost (1 - alpha) D_AL + alpha M(gamma).
//
// The starting plan (config.init) only seeds the first linearization, and
// the first step is always taken. Every later step is safeguarded: if the new
// plan raises L, the step is cut back by an exact line search along the
// segment (L is quadratic there), so the recorded loss trace never increases.
// With alpha == 0 the single step is sinkhorn_solve on D_AL, for any init.

#pragma once

#include "gmot/gromov.hpp"
#include "gmot/sinkhorn.hpp"
#include "gmot/types.hpp"

namespace gmot {

/// (1 - alpha) D_AL + alpha M(gamma). Kind is fused.
CostMatrix fused_cost(const CostMatrix& cross, const CostMatrix& edges_a, const CostMatrix& edges_l,
                      const Coupling& coupling, double alpha);

struct FusedResult {
  Coupling coupling;
  SolveDiagnostics diagnostics;
  double loss = 0.0;      // (1 - alpha) * node_cost + alpha * edge_cost, no entropy term
  double node_cost = 0.0; // <D_AL, gamma>
  double edge_cost = 0.0; // GW(gamma)
};

FusedResult fgwd_solve(const CostMatrix& cross, const CostMatrix& edges_a, const CostMatrix& edges_l,
                       const Marginal& a, const Marginal& b, const SolverConfig& config);

struct AlignmentResult {
  CostMatrix node_cost;  // cross-modal cost the solve used (blended if rho > 0)
  CostMatrix edges_a;
  CostMatrix edges_l;
  FusedResult solve;
};

/// End-to-end alignment of two feature sequences under uniform marginals:
/// cosine costs, temporal blend with config.rho, fused solve with
/// config.alpha.
AlignmentResult align_sequences(const FeatureSequence& acoustic, const FeatureSequence& linguistic,
                                const SolverConfig& config);

}  // namespace gmot
