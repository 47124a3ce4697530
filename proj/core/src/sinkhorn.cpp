// SPDX-License-Identifier: Apache-2.0

#include "gmot/sinkhorn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>

namespace gmot {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw ShapeError(std::string(what) + ": expected " + std::to_string(rows) + "x" +
                     std::to_string(cols) + ", got " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()));
  }
}

// Row-wise log-sum-exp of log_kernel + v, written into out.
void row_lse(const Matrix& log_kernel, const Vector& v, Vector& out) {
  const Eigen::Index n = log_kernel.rows();
  const Eigen::Index m = log_kernel.cols();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double* k = log_kernel.data() + i * m;
    double mx = kNegInf;
    for (Eigen::Index j = 0; j < m; ++j) mx = std::max(mx, k[j] + v[j]);
    if (mx == kNegInf) throw DomainError("kernel row " + std::to_string(i) + " has no support");
    double s = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) s += std::exp(k[j] + v[j] - mx);
    out[i] = mx + std::log(s);
  }
}

// Column-wise log-sum-exp of log_kernel + u, written into out.
void col_lse(const Matrix& log_kernel, const Vector& u, Vector& mx, Vector& out) {
  const Eigen::Index n = log_kernel.rows();
  const Eigen::Index m = log_kernel.cols();
  mx.setConstant(kNegInf);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double* k = log_kernel.data() + i * m;
    for (Eigen::Index j = 0; j < m; ++j) mx[j] = std::max(mx[j], k[j] + u[i]);
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    if (mx[j] == kNegInf) throw DomainError("kernel column " + std::to_string(j) + " has no support");
  }
  out.setZero();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double* k = log_kernel.data() + i * m;
    for (Eigen::Index j = 0; j < m; ++j) out[j] += std::exp(k[j] + u[i] - mx[j]);
  }
  for (Eigen::Index j = 0; j < m; ++j) out[j] = mx[j] + std::log(out[j]);
}

// Largest short side for which the Newton polish factors its Schur complement.
constexpr Eigen::Index kNewtonMaxSide = 512;
constexpr int kNewtonMaxSteps = 60;
constexpr int kStallWindow = 50;

// Newton ascent on the dual a.u + b.v - sum exp(K + u + v), which Sinkhorn
// sweeps climb only linearly once the plan is close to a permutation. The
// Hessian block on the long side is diagonal, so each step solves the Schur
// complement on the short side (m <= n here) with v_{m-1} pinned.
bool newton_polish_tall(const Matrix& log_kernel, const Vector& a, const Vector& b, Vector& u,
                        Vector& v, double tol) {
  const Eigen::Index n = log_kernel.rows();
  const Eigen::Index m = log_kernel.cols();
  const auto plan_at = [&](const Vector& uu, const Vector& vv) {
    Matrix p(n, m);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) p(i, j) = std::exp(log_kernel(i, j) + uu[i] + vv[j]);
    }
    return p;
  };
  const auto dual = [&](const Vector& uu, const Vector& vv, const Matrix& p) {
    return a.dot(uu) + b.dot(vv) - p.sum();
  };

  Matrix p = plan_at(u, v);
  for (int step = 0; step < kNewtonMaxSteps; ++step) {
    const Vector r = p.rowwise().sum();
    const Vector c = p.colwise().sum().transpose();
    const Vector gu = a - r;
    const Vector gv = b - c;
    if (std::max(gu.cwiseAbs().maxCoeff(), gv.cwiseAbs().maxCoeff()) <= tol) return true;

    const Vector r_inv = r.cwiseMax(std::numeric_limits<double>::min()).cwiseInverse();
    Vector dv = Vector::Zero(m);
    if (m > 1) {
      const Matrix scaled = r_inv.asDiagonal() * p;
      Matrix schur = -p.transpose() * scaled;
      schur.diagonal() += c;
      const Vector rhs = gv - scaled.transpose() * gu;
      const Eigen::Index k = m - 1;
      Eigen::LDLT<Matrix> ldlt(schur.topLeftCorner(k, k));
      if (ldlt.info() != Eigen::Success) return false;
      dv.head(k) = ldlt.solve(rhs.head(k));
      if (!dv.allFinite()) return false;
    }
    const Vector du = r_inv.cwiseProduct(gu - p * dv);
    const double slope = gu.dot(du) + gv.dot(dv);
    if (!(slope > 0.0)) return false;

    const double current = dual(u, v, p);
    double t = 1.0;
    bool moved = false;
    for (int halving = 0; halving < 40; ++halving, t *= 0.5) {
      const Vector u_next = u + t * du;
      const Vector v_next = v + t * dv;
      Matrix p_next = plan_at(u_next, v_next);
      const double value = dual(u_next, v_next, p_next);
      if (std::isfinite(value) && value >= current + 1e-4 * t * slope) {
        u = u_next;
        v = v_next;
        p = std::move(p_next);
        moved = true;
        break;
      }
    }
    if (!moved) return false;
  }
  const double violation = std::max((p.rowwise().sum() - a).cwiseAbs().maxCoeff(),
                                    (p.colwise().sum().transpose() - b).cwiseAbs().maxCoeff());
  return violation <= tol;
}

// Polishes in place; u and v are left untouched when it fails.
bool newton_polish(const Matrix& log_kernel, const Marginal& a, const Marginal& b, Vector& u,
                   Vector& v, double tol) {
  if (std::min(log_kernel.rows(), log_kernel.cols()) > kNewtonMaxSide) return false;
  Vector uu = u;
  Vector vv = v;
  const bool ok = log_kernel.cols() <= log_kernel.rows()
                      ? newton_polish_tall(log_kernel, a.weights(), b.weights(), uu, vv, tol)
                      : newton_polish_tall(log_kernel.transpose(), b.weights(), a.weights(), vv, uu, tol);
  if (ok) {
    u = std::move(uu);
    v = std::move(vv);
  }
  return ok;
}

}  // namespace

double transport_cost(const Matrix& cost, const Matrix& plan) {
  check_shape(plan, cost.rows(), cost.cols(), "transport_cost");
  return cost.cwiseProduct(plan).sum();
}

double transport_cost(const CostMatrix& cost, const Coupling& coupling) {
  return transport_cost(cost.values(), coupling.plan());
}

double entropy(const Matrix& plan) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < plan.rows(); ++i) {
    for (Eigen::Index j = 0; j < plan.cols(); ++j) {
      const double p = plan(i, j);
      if (p < 0.0) throw DomainError("entropy of a plan with a negative entry");
      if (p > 0.0) h -= p * std::log(p);
    }
  }
  return h;
}

double entropy(const Coupling& coupling) { return entropy(coupling.plan()); }

Matrix plan_from_log(const Matrix& log_plan) {
  return log_plan.unaryExpr([](double x) { return std::exp(x); });
}

Matrix round_to_marginals(const Matrix& plan, const Marginal& a, const Marginal& b) {
  check_shape(plan, a.size(), b.size(), "round_to_marginals");
  Matrix x = plan;
  const Vector rows = x.rowwise().sum();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (rows[i] > a[i]) x.row(i) *= a[i] / rows[i];
  }
  const Vector cols = x.colwise().sum().transpose();
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    if (cols[j] > b[j]) x.col(j) *= b[j] / cols[j];
  }
  const Vector err_r = (a.weights() - x.rowwise().sum()).cwiseMax(0.0);
  const Vector err_c = (b.weights() - x.colwise().sum().transpose()).cwiseMax(0.0);
  const double total = err_r.sum();
  if (total > 0.0) x += err_r * err_c.transpose() / total;
  return x;
}

double marginal_violation(const Matrix& plan, const Marginal& a, const Marginal& b) {
  check_shape(plan, a.size(), b.size(), "marginal_violation");
  const double rows = (plan.rowwise().sum() - a.weights()).cwiseAbs().maxCoeff();
  const double cols = (plan.colwise().sum().transpose() - b.weights()).cwiseAbs().maxCoeff();
  return std::max(rows, cols);
}

ScalingResult scale_log_kernel(const Matrix& log_kernel, const Marginal& a, const Marginal& b,
                               int max_iters, double tol, const Scalings* warm) {
  check_shape(log_kernel, a.size(), b.size(), "scale_log_kernel");
  const Eigen::Index n = log_kernel.rows();
  const Eigen::Index m = log_kernel.cols();
  const Vector log_a = a.weights().array().log();
  const Vector log_b = b.weights().array().log();

  Vector u = Vector::Zero(n);
  Vector v = Vector::Zero(m);
  if (warm != nullptr) {
    if (warm->u.size() != n || warm->v.size() != m) throw ShapeError("warm-start scalings mismatch");
    u = warm->u;
    v = warm->v;
  }

  Vector lse_rows(n), lse_cols(m), col_max(m);

  // Column violation of the starting point. After each column update the
  // columns match b up to rounding, so only the rows need checking.
  col_lse(log_kernel, u, col_max, lse_cols);
  double col_violation = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    col_violation = std::max(col_violation, std::abs(std::exp(v[j] + lse_cols[j]) - b[j]));
  }

  ScalingResult result;
  Scalings best{u, v};
  double best_violation = std::numeric_limits<double>::infinity();

  int sweeps = 0;
  double window_start = std::numeric_limits<double>::infinity();
  bool polish_tried = false;
  while (true) {
    row_lse(log_kernel, v, lse_rows);
    double row_violation = 0.0;
    double objective = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double r = std::exp(u[i] + lse_rows[i]);
      row_violation = std::max(row_violation, std::abs(r - a[i]));
      objective += u[i] * r;
    }
    const double violation = std::max(row_violation, col_violation);
    if (sweeps > 0) {
      for (Eigen::Index j = 0; j < m; ++j) objective += v[j] * b[j];
      result.scaled_objective.push_back(objective);
    }
    if (violation < best_violation) {
      best_violation = violation;
      best.u = u;
      best.v = v;
    }
    if (violation <= tol) {
      result.converged = true;
      break;
    }
    if (sweeps > 0 && sweeps % kStallWindow == 0) {
      // Sweeps that no longer halve the violation per window are crawling;
      // finish with Newton steps instead.
      const bool stalled = violation > 0.5 * window_start;
      window_start = violation;
      if (stalled && !polish_tried) {
        polish_tried = true;
        if (newton_polish(log_kernel, a, b, u, v, tol)) {
          result.converged = true;
          break;
        }
      }
    }
    if (sweeps == max_iters) break;

    u = log_a - lse_rows;
    col_lse(log_kernel, u, col_max, lse_cols);
    v = log_b - lse_cols;
    col_violation = 0.0;
    ++sweeps;
  }

  if (!result.converged) {
    u = best.u;
    v = best.v;
  }
  result.iterations = sweeps;
  result.log_plan = log_kernel;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) result.log_plan(i, j) += u[i] + v[j];
  }
  result.scalings = Scalings{std::move(u), std::move(v)};
  return result;
}

SinkhornResult sinkhorn_solve(const CostMatrix& cost, const Marginal& a, const Marginal& b,
                              const SolverConfig& config) {
  config.validate();
  check_shape(cost.values(), a.size(), b.size(), "sinkhorn_solve");
  const Matrix log_kernel = -cost.values() / config.beta;
  ScalingResult scaled =
      scale_log_kernel(log_kernel, a, b, config.max_inner_iters, config.marginal_tol);

  Matrix plan = plan_from_log(scaled.log_plan);
  SolveDiagnostics diag;
  diag.scaling_violation = marginal_violation(plan, a, b);
  if (!scaled.converged) {
    plan = round_to_marginals(plan, a, b);
    diag.rounded = true;
  }
  diag.iterations = scaled.iterations;
  diag.inner_iterations = scaled.iterations;
  diag.converged = scaled.converged;
  diag.objective_trace.reserve(scaled.scaled_objective.size());
  for (double s : scaled.scaled_objective) diag.objective_trace.push_back(config.beta * s);
  diag.final_marginal_violation = marginal_violation(plan, a, b);
  diag.final_entropy = entropy(plan);
  diag.entropic_objective = transport_cost(cost.values(), plan) - config.beta * diag.final_entropy;
  return SinkhornResult{Coupling(std::move(plan), a, b), std::move(diag)};
}

}  // namespace gmot
