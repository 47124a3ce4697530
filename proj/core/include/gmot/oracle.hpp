// SPDX-License-Identifier: Apache-2.0
//
// Exact and brute-force references for small problems. This library depends
// only on the core types and never on the solvers it is used to check.

#pragma once

#include <cstddef>
#include <vector>

#include "gmot/types.hpp"

namespace gmot::oracle {

inline constexpr std::size_t kMaxExpandedSize = 64;

struct ExactTransport {
  Coupling coupling;
  double cost = 0.0;
};

/// Exact unregularized transport under uniform marginals. Each row point is
/// replicated L / l_a times and each column point L / l_t times, with
/// L = lcm(l_a, l_t); the L x L assignment problem is solved with the
/// Hungarian method and contracted back. Throws SizeError when L > 64.
ExactTransport exact_ot_assignment(const CostMatrix& cost, std::size_t rows, std::size_t cols);

/// Minimum-cost perfect matching of a square cost matrix (Hungarian method,
/// O(n^3)). Entry i of the result is the column assigned to row i.
std::vector<Eigen::Index> solve_assignment(const Matrix& cost);

/// Entropic transport on a 2 x 2 problem with uniform marginals. Feasible
/// plans are [[t, 1/2 - t], [1/2 - t, t]]; t is found by bisection on the
/// derivative of <D, gamma(t)> - beta H(gamma(t)), to 1e-12 or better.
Coupling entropic_ot_2x2(const CostMatrix& cost, double beta);

/// Brute-force GW value straight from the quadruple sum.
double gw_value(const Matrix& edges_a, const Matrix& edges_l, const Matrix& plan);

/// Reference GW minimum. 2 x 2: grid over t in [0, 1/2] with the given step.
/// n == m <= 4: minimum over all n! permutation couplings. Anything else
/// throws SizeError.
double gw_exhaustive(const CostMatrix& edges_a, const CostMatrix& edges_l, double grid_step);

}  // namespace gmot::oracle
