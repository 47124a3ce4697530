// SPDX-License-Identifier: Apache-2.0

#include "gmot/gromov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "descent.hpp"

namespace gmot {
namespace {

void check_edges(const Matrix& edges_a, const Matrix& edges_l, const Matrix& plan) {
  if (edges_a.rows() != edges_a.cols() || edges_l.rows() != edges_l.cols()) {
    throw ShapeError("edge cost matrices must be square");
  }
  if (plan.rows() != edges_a.rows() || plan.cols() != edges_l.rows()) {
    throw ShapeError("plan is " + std::to_string(plan.rows()) + "x" + std::to_string(plan.cols()) +
                     " but edge spaces have sizes " + std::to_string(edges_a.rows()) + " and " +
                     std::to_string(edges_l.rows()));
  }
}

void check_kinds(const CostMatrix& edges_a, const CostMatrix& edges_l) {
  if (edges_a.kind() != CostKind::kIntraModal || edges_l.kind() != CostKind::kIntraModal) {
    throw ShapeError("Gromov-Wasserstein terms need intra-modal edge costs");
  }
}

Matrix naive_linearized(const Matrix& edges_a, const Matrix& edges_l, const Matrix& plan) {
  const Eigen::Index la = edges_a.rows();
  const Eigen::Index lt = edges_l.rows();
  Matrix m = Matrix::Zero(la, lt);
  for (Eigen::Index i = 0; i < la; ++i) {
    for (Eigen::Index k = 0; k < lt; ++k) {
      double acc = 0.0;
      for (Eigen::Index j = 0; j < la; ++j) {
        for (Eigen::Index l = 0; l < lt; ++l) {
          const double diff = edges_a(i, j) - edges_l(k, l);
          acc += diff * diff * plan(j, l);
        }
      }
      m(i, k) = acc;
    }
  }
  return m;
}

Matrix fast_linearized(const Matrix& edges_a, const Matrix& edges_l, const Matrix& plan) {
  const Vector p = plan.rowwise().sum();
  const Vector q = plan.colwise().sum().transpose();
  const Vector left = edges_a.cwiseProduct(edges_a) * p;
  const Vector right = edges_l.cwiseProduct(edges_l) * q;
  Matrix m = -2.0 * (edges_a * plan * edges_l.transpose());
  m.colwise() += left;
  m.rowwise() += right.transpose();
  return m.cwiseMax(0.0);
}

}  // namespace

Matrix gw_linearized_cost(const Matrix& edges_a, const Matrix& edges_l, const Matrix& plan,
                          GwKernel kernel) {
  check_edges(edges_a, edges_l, plan);
  return kernel == GwKernel::kFast ? fast_linearized(edges_a, edges_l, plan)
                                   : naive_linearized(edges_a, edges_l, plan);
}

CostMatrix gw_linearized_cost(const CostMatrix& edges_a, const CostMatrix& edges_l,
                              const Coupling& coupling, GwKernel kernel) {
  check_kinds(edges_a, edges_l);
  return CostMatrix(gw_linearized_cost(edges_a.values(), edges_l.values(), coupling.plan(), kernel),
                    CostKind::kFused);
}

double gw_objective(const Matrix& edges_a, const Matrix& edges_l, const Matrix& plan) {
  check_edges(edges_a, edges_l, plan);
  struct Cell {
    Eigen::Index row, col;
    double mass;
  };
  std::vector<Cell> support;
  for (Eigen::Index i = 0; i < plan.rows(); ++i) {
    for (Eigen::Index k = 0; k < plan.cols(); ++k) {
      if (plan(i, k) > 0.0) support.push_back({i, k, plan(i, k)});
    }
  }
  double total = 0.0;
  for (const Cell& x : support) {
    double inner = 0.0;
    for (const Cell& y : support) {
      const double diff = edges_a(x.row, y.row) - edges_l(x.col, y.col);
      inner += diff * diff * y.mass;
    }
    total += x.mass * inner;
  }
  return total;
}

double gw_objective(const CostMatrix& edges_a, const CostMatrix& edges_l, const Coupling& coupling) {
  check_kinds(edges_a, edges_l);
  return gw_objective(edges_a.values(), edges_l.values(), coupling.plan());
}

Matrix staircase_plan(const Marginal& a, const Marginal& b) {
  const Eigen::Index n = a.size();
  const Eigen::Index m = b.size();
  Matrix plan = Matrix::Zero(n, m);
  Vector ra = a.weights();
  Vector rb = b.weights();
  Eigen::Index i = 0, j = 0;
  while (i < n && j < m) {
    const double x = std::min(ra[i], rb[j]);
    plan(i, j) += x;
    ra[i] -= x;
    rb[j] -= x;
    if (ra[i] <= rb[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return plan;
}

Matrix initial_plan(const Marginal& a, const Marginal& b, const SolverConfig& config) {
  switch (config.init) {
    case InitMode::kProduct:
      return a.weights() * b.weights().transpose();
    case InitMode::kIdentityBand: {
      Matrix stair = staircase_plan(a, b);
      if (config.band_width == 0) return stair;
      const auto la = static_cast<double>(a.size());
      const auto lt = static_cast<double>(b.size());
      const double limit = config.band_width / std::max(la, lt);
      Matrix log_mask(a.size(), b.size());
      for (Eigen::Index i = 0; i < log_mask.rows(); ++i) {
        for (Eigen::Index j = 0; j < log_mask.cols(); ++j) {
          const double gap =
              std::abs(static_cast<double>(i + 1) / la - static_cast<double>(j + 1) / lt);
          const bool inside = gap <= limit || stair(i, j) > 0.0;
          log_mask(i, j) = inside ? 0.0 : -std::numeric_limits<double>::infinity();
        }
      }
      ScalingResult scaled =
          scale_log_kernel(log_mask, a, b, config.max_inner_iters, config.marginal_tol);
      const Matrix band = plan_from_log(scaled.log_plan);
      return scaled.converged ? band : round_to_marginals(band, a, b);
    }
    case InitMode::kUserSupplied: {
      const Coupling& init = *config.initial_coupling;
      if (init.rows() != a.size() || init.cols() != b.size()) {
        throw ShapeError("initial coupling is " + std::to_string(init.rows()) + "x" +
                         std::to_string(init.cols()) + ", problem is " +
                         std::to_string(a.size()) + "x" + std::to_string(b.size()));
      }
      const double tol = std::max(1e-6, config.marginal_tol);
      if (marginal_violation(init.plan(), a, b) > tol) {
        throw DomainError("initial coupling does not match the problem marginals");
      }
      return init.plan();
    }
  }
  throw DomainError("unknown initialization mode");
}

GromovResult gwd_solve(const CostMatrix& edges_a, const CostMatrix& edges_l, const Marginal& a,
                       const Marginal& b, const SolverConfig& config) {
  check_kinds(edges_a, edges_l);
  detail::DescentOutput out =
      detail::fused_descent(nullptr, edges_a.values(), edges_l.values(), a, b, 1.0, config);
  const double objective = gw_objective(edges_a.values(), edges_l.values(), out.plan);
  return GromovResult{Coupling(std::move(out.plan), a, b), std::move(out.diagnostics), objective};
}

}  // namespace gmot
