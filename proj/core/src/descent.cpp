// SPDX-License-Identifier: Apache-2.0

#include "descent.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "gmot/gromov.hpp"

namespace gmot::detail {
namespace {

struct Evaluation {
  double loss = 0.0;
  Matrix linearized;  // M(plan); empty when alpha == 0
};

class FusedLoss {
 public:
  FusedLoss(const Matrix* node_cost, const Matrix& edges_a, const Matrix& edges_l, double alpha)
      : node_cost_(node_cost), edges_a_(edges_a), edges_l_(edges_l), alpha_(alpha) {}

  Evaluation operator()(const Matrix& plan) const {
    Evaluation e;
    if (node_cost_ != nullptr && alpha_ < 1.0) {
      e.loss = (1.0 - alpha_) * transport_cost(*node_cost_, plan);
    }
    if (alpha_ > 0.0) {
      e.linearized = gw_linearized_cost(edges_a_, edges_l_, plan, GwKernel::kFast);
      e.loss += alpha_ * e.linearized.cwiseProduct(plan).sum();
    }
    return e;
  }

  // (1 - alpha) D + alpha M, with the alpha == 0 and missing-D cases exact.
  Matrix fused_cost(const Evaluation& at) const {
    if (alpha_ == 0.0) return *node_cost_;
    if (node_cost_ == nullptr) return alpha_ * at.linearized;
    return (1.0 - alpha_) * (*node_cost_) + alpha_ * at.linearized;
  }

  // Derivative of the loss along plan + t * step at t = 0.
  double slope(const Matrix& step, const Evaluation& at) const {
    double s = 0.0;
    if (node_cost_ != nullptr && alpha_ < 1.0) s += (1.0 - alpha_) * transport_cost(*node_cost_, step);
    if (alpha_ > 0.0) s += 2.0 * alpha_ * at.linearized.cwiseProduct(step).sum();
    return s;
  }

 private:
  const Matrix* node_cost_;
  const Matrix& edges_a_;
  const Matrix& edges_l_;
  double alpha_;
};

Matrix log_of(const Matrix& plan) {
  return plan.unaryExpr([](double x) { return std::log(x); });
}

}  // namespace

DescentOutput fused_descent(const Matrix* node_cost, const Matrix& edges_a, const Matrix& edges_l,
                            const Marginal& a, const Marginal& b, double alpha,
                            const SolverConfig& config) {
  config.validate();
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
  if (node_cost == nullptr && alpha != 1.0) throw DomainError("node cost required when alpha < 1");
  if (edges_a.rows() != a.size() || edges_l.rows() != b.size()) {
    throw ShapeError("edge costs do not match the marginals");
  }
  if (node_cost != nullptr && (node_cost->rows() != a.size() || node_cost->cols() != b.size())) {
    throw ShapeError("node cost is " + std::to_string(node_cost->rows()) + "x" +
                     std::to_string(node_cost->cols()) + ", marginals are " +
                     std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }

  const FusedLoss loss(node_cost, edges_a, edges_l, alpha);
  const bool proximal = config.outer_step == OuterStep::kProximal;

  Matrix plan = initial_plan(a, b, config);
  Matrix log_plan;
  if (proximal) log_plan = log_of(plan);
  Evaluation current = loss(plan);

  SolveDiagnostics diag;
  std::optional<Scalings> warm;
  bool inner_converged = true;

  for (int outer = 1; outer <= config.max_outer_iters; ++outer) {
    Matrix log_kernel = -loss.fused_cost(current) / config.beta;
    if (proximal) log_kernel += log_plan;

    ScalingResult scaled = scale_log_kernel(log_kernel, a, b, config.max_inner_iters,
                                            config.marginal_tol, warm ? &*warm : nullptr);
    diag.inner_iterations += scaled.iterations;
    inner_converged = scaled.converged;
    diag.iterations = outer;

    Matrix candidate = plan_from_log(scaled.log_plan);
    diag.scaling_violation = std::max(diag.scaling_violation, marginal_violation(candidate, a, b));
    if (!scaled.converged) {
      candidate = round_to_marginals(candidate, a, b);
      if (proximal) scaled.log_plan = log_of(candidate);
      diag.rounded = true;
    }
    Evaluation next = loss(candidate);
    // The starting plan only seeds the first linearization; the first step
    // is always taken. Later steps must not raise the loss.
    bool accepted = outer == 1 || next.loss <= current.loss;

    if (!accepted) {
      // The full step raised the loss. The loss is quadratic along the
      // segment towards the candidate, so take its exact minimizer.
      const Matrix step = candidate - plan;
      const double c1 = loss.slope(step, current);
      const double c2 = next.loss - current.loss - c1;
      const double t = c2 > 0.0 ? std::clamp(-c1 / (2.0 * c2), 0.0, 1.0) : 0.0;
      if (t > 0.0) {
        candidate = plan + t * step;
        next = loss(candidate);
        accepted = next.loss <= current.loss;
        if (accepted && proximal) scaled.log_plan = log_of(candidate);
      }
    }

    if (!accepted) {
      // No descent along the solver's direction: the iterate is stationary.
      diag.converged = true;
      break;
    }

    const double previous = current.loss;
    plan = std::move(candidate);
    if (proximal) log_plan = std::move(scaled.log_plan);
    current = std::move(next);
    warm = std::move(scaled.scalings);
    diag.objective_trace.push_back(current.loss);

    // Without the edge term the linearized cost is constant, so one step
    // already solves the problem.
    if (alpha == 0.0 ||
        (outer > 1 && std::abs(current.loss - previous) <= config.objective_rel_tol * std::abs(previous))) {
      diag.converged = true;
      break;
    }
  }
  diag.converged = diag.converged && inner_converged;
  diag.final_marginal_violation = marginal_violation(plan, a, b);
  diag.final_entropy = entropy(plan);
  diag.entropic_objective = current.loss - config.beta * diag.final_entropy;
  return DescentOutput{std::move(plan), std::move(diag)};
}

}  // namespace gmot::detail
