// SPDX-License-Identifier: Apache-2.0

#include "gmot/fused.hpp"

#include <string>
#include <utility>

#include "descent.hpp"
#include "gmot/ground_cost.hpp"

namespace gmot {

CostMatrix fused_cost(const CostMatrix& cross, const CostMatrix& edges_a, const CostMatrix& edges_l,
                      const Coupling& coupling, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
  if (cross.rows() != coupling.rows() || cross.cols() != coupling.cols()) {
    throw ShapeError("node cost and coupling shapes differ");
  }
  const CostMatrix linearized = gw_linearized_cost(edges_a, edges_l, coupling);
  if (alpha == 0.0) return CostMatrix(cross.values(), CostKind::kFused);
  if (alpha == 1.0) return CostMatrix(linearized.values(), CostKind::kFused);
  return CostMatrix((1.0 - alpha) * cross.values() + alpha * linearized.values(), CostKind::kFused);
}

FusedResult fgwd_solve(const CostMatrix& cross, const CostMatrix& edges_a, const CostMatrix& edges_l,
                       const Marginal& a, const Marginal& b, const SolverConfig& config) {
  config.validate();
  if (edges_a.kind() != CostKind::kIntraModal || edges_l.kind() != CostKind::kIntraModal) {
    throw ShapeError("fgwd_solve needs intra-modal edge costs");
  }
  detail::DescentOutput out = detail::fused_descent(&cross.values(), edges_a.values(),
                                                    edges_l.values(), a, b, config.alpha, config);
  FusedResult result{Coupling(std::move(out.plan), a, b), std::move(out.diagnostics)};
  result.node_cost = transport_cost(cross, result.coupling);
  result.edge_cost = gw_objective(edges_a, edges_l, result.coupling);
  result.loss = (1.0 - config.alpha) * result.node_cost + config.alpha * result.edge_cost;
  return result;
}

AlignmentResult align_sequences(const FeatureSequence& acoustic, const FeatureSequence& linguistic,
                                const SolverConfig& config) {
  config.validate();
  const auto la = static_cast<std::size_t>(acoustic.rows());
  const auto lt = static_cast<std::size_t>(linguistic.rows());
  CostMatrix cross = cross_modal_cost(acoustic, linguistic);
  if (config.rho > 0.0 && (config.temporal_in_fused || config.alpha == 0.0)) {
    cross = blend_temporal(cross, temporal_prior(la, lt, config.centered_positions), config.rho);
  }
  CostMatrix edges_a = intra_modal_cost(acoustic);
  CostMatrix edges_l = intra_modal_cost(linguistic);
  FusedResult solve =
      fgwd_solve(cross, edges_a, edges_l, uniform_marginal(la), uniform_marginal(lt), config);
  return AlignmentResult{std::move(cross), std::move(edges_a), std::move(edges_l), std::move(solve)};
}

}  // namespace gmot
