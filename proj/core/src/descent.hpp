// SPDX-License-Identifier: Apache-2.0
//
// Outer loop shared by gwd_solve and fgwd_solve.

#pragma once

#include "gmot/sinkhorn.hpp"
#include "gmot/types.hpp"

namespace gmot::detail {

struct DescentOutput {
  Matrix plan;
  SolveDiagnostics diagnostics;
};

// Minimizes (1 - alpha) <node_cost, plan> + alpha GW(plan). node_cost may be
// null only when alpha == 1.
DescentOutput fused_descent(const Matrix* node_cost, const Matrix& edges_a, const Matrix& edges_l,
                            const Marginal& a, const Marginal& b, double alpha,
                            const SolverConfig& config);

}  // namespace gmot::detail
