// SPDX-License-Identifier: Apache-2.0
//
// Entropy-regularized optimal transport, solved with log-domain Sinkhorn
// scaling.

#pragma once

#include <vector>

#include "gmot/types.hpp"

namespace gmot {

struct SolveDiagnostics {
  // Sinkhorn sweeps for sinkhorn_solve; outer iterations for the Gromov
  // solvers.
  int iterations = 0;
  // Total Sinkhorn sweeps across all outer iterations.
  int inner_iterations = 0;
  // sinkhorn_solve: entropic objective after every sweep.
  // Gromov solvers: unregularized loss after every accepted outer
  // iteration (the starting plan is not included).
  std::vector<double> objective_trace;
  double final_marginal_violation = 0.0;
  // Set when some scaling run hit its sweep cap and the plan was pushed onto
  // the marginals with round_to_marginals. scaling_violation is the largest
  // violation seen before rounding.
  bool rounded = false;
  double scaling_violation = 0.0;
  double final_entropy = 0.0;
  // Unregularized loss of the final plan minus beta * H(plan).
  double entropic_objective = 0.0;
  bool converged = false;
};

/// <D, gamma>.
double transport_cost(const CostMatrix& cost, const Coupling& coupling);
double transport_cost(const Matrix& cost, const Matrix& plan);

/// -sum gamma log gamma with 0 log 0 = 0. Throws DomainError on a negative
/// entry.
double entropy(const Coupling& coupling);
double entropy(const Matrix& plan);

/// Log-domain scalings: plan = exp(log_kernel + u 1^T + 1 v^T).
struct Scalings {
  Vector u;
  Vector v;
};

struct ScalingResult {
  Matrix log_plan;
  Scalings scalings;
  int iterations = 0;
  bool converged = false;
  // Per sweep: sum_i u_i r_i + sum_j v_j c_j, with r, c the plan's row and
  // column sums. Equals (<C, plan> + beta sum plan log plan) / beta when the
  // kernel is -C / beta.
  std::vector<double> scaled_objective;
};

/// Scales exp(log_kernel) to the marginals a and b. Entries of log_kernel
/// may be -inf (excluded cells). Stops as soon as the infinity-norm marginal
/// violation is at most tol. When a window of sweeps fails to halve the
/// violation (nearly hard plans), the scalings are finished by Newton steps
/// on the dual; the Newton steps do not count as sweeps. If max_iters runs
/// out, returns the iterate with
/// the smallest violation seen and converged == false. `warm` seeds the
/// scalings.
ScalingResult scale_log_kernel(const Matrix& log_kernel, const Marginal& a, const Marginal& b,
                               int max_iters, double tol, const Scalings* warm = nullptr);

/// Elementwise exp of a log plan. -inf maps to exactly 0 (Eigen's packet
/// exp clamps its argument and would leave a denormal).
Matrix plan_from_log(const Matrix& log_plan);

/// Projects a nonnegative plan onto the couplings of a and b (Altschuler,
/// Weed and Rigollet 2017): scale down overfull rows, then overfull columns,
/// then add the rank-one correction err_r err_c^T / |err_r|_1. The result is
/// feasible up to rounding and differs from the input by at most twice the
/// L1 marginal violation.
Matrix round_to_marginals(const Matrix& plan, const Marginal& a, const Marginal& b);

/// Infinity-norm violation of both marginals.
double marginal_violation(const Matrix& plan, const Marginal& a, const Marginal& b);

struct SinkhornResult {
  Coupling coupling;
  SolveDiagnostics diagnostics;
};

/// argmin <D, gamma> - beta H(gamma) over couplings of a and b.
SinkhornResult sinkhorn_solve(const CostMatrix& cost, const Marginal& a, const Marginal& b,
                              const SolverConfig& config);

}  // namespace gmot
