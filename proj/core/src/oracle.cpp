// SPDX-License-Identifier: Apache-2.0

#include "gmot/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace gmot::oracle {
namespace {

Coupling two_by_two(double t) {
  Matrix plan(2, 2);
  plan << t, 0.5 - t, 0.5 - t, t;
  return Coupling(std::move(plan), uniform_marginal(2), uniform_marginal(2));
}

}  // namespace

std::vector<Eigen::Index> solve_assignment(const Matrix& cost) {
  if (cost.rows() != cost.cols()) throw ShapeError("assignment needs a square cost");
  const Eigen::Index n = cost.rows();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // Shortest augmenting path with row/column potentials, 1-based with a
  // virtual column 0.
  std::vector<double> row_pot(n + 1, 0.0), col_pot(n + 1, 0.0);
  std::vector<Eigen::Index> match(n + 1, 0), way(n + 1, 0);
  for (Eigen::Index i = 1; i <= n; ++i) {
    match[0] = i;
    Eigen::Index j0 = 0;
    std::vector<double> min_slack(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const Eigen::Index i0 = match[j0];
      double delta = kInf;
      Eigen::Index j1 = 0;
      for (Eigen::Index j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double slack = cost(i0 - 1, j - 1) - row_pot[i0] - col_pot[j];
        if (slack < min_slack[j]) {
          min_slack[j] = slack;
          way[j] = j0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          j1 = j;
        }
      }
      for (Eigen::Index j = 0; j <= n; ++j) {
        if (used[j]) {
          row_pot[match[j]] += delta;
          col_pot[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const Eigen::Index j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<Eigen::Index> assignment(n, -1);
  for (Eigen::Index j = 1; j <= n; ++j) assignment[match[j] - 1] = j - 1;
  return assignment;
}

ExactTransport exact_ot_assignment(const CostMatrix& cost, std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw SizeError("exact_ot_assignment: empty problem");
  if (static_cast<std::size_t>(cost.rows()) != rows ||
      static_cast<std::size_t>(cost.cols()) != cols) {
    throw ShapeError("exact_ot_assignment: cost is " + std::to_string(cost.rows()) + "x" +
                     std::to_string(cost.cols()) + ", expected " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  }
  const std::size_t expanded = std::lcm(rows, cols);
  if (expanded > kMaxExpandedSize) {
    throw SizeError("exact_ot_assignment: lcm(" + std::to_string(rows) + ", " +
                    std::to_string(cols) + ") = " + std::to_string(expanded) + " exceeds " +
                    std::to_string(kMaxExpandedSize));
  }
  const std::size_t row_rep = expanded / rows;
  const std::size_t col_rep = expanded / cols;
  const auto n = static_cast<Eigen::Index>(expanded);
  Matrix big(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      big(r, c) = cost(r / static_cast<Eigen::Index>(row_rep), c / static_cast<Eigen::Index>(col_rep));
    }
  }
  const std::vector<Eigen::Index> assignment = solve_assignment(big);
  Matrix plan = Matrix::Zero(cost.rows(), cost.cols());
  const double unit = 1.0 / static_cast<double>(expanded);
  for (Eigen::Index r = 0; r < n; ++r) {
    plan(r / static_cast<Eigen::Index>(row_rep),
         assignment[r] / static_cast<Eigen::Index>(col_rep)) += unit;
  }
  const double total = cost.values().cwiseProduct(plan).sum();
  return ExactTransport{Coupling(std::move(plan), uniform_marginal(rows), uniform_marginal(cols)),
                        total};
}

Coupling entropic_ot_2x2(const CostMatrix& cost, double beta) {
  if (cost.rows() != 2 || cost.cols() != 2) throw ShapeError("entropic_ot_2x2 needs a 2x2 cost");
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  // f(t) = c t + const + 2 beta [t log t + (1/2 - t) log(1/2 - t)],
  // f'(t) = c + 2 beta log(t / (1/2 - t)), strictly increasing on (0, 1/2).
  const double c = cost(0, 0) + cost(1, 1) - cost(0, 1) - cost(1, 0);
  auto derivative = [&](double t) { return c + 2.0 * beta * std::log(t / (0.5 - t)); };
  double lo = 0.0, hi = 0.5;
  for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= 0.0 || mid >= 0.5) break;
    if (derivative(mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return two_by_two(0.5 * (lo + hi));
}

double gw_value(const Matrix& edges_a, const Matrix& edges_l, const Matrix& plan) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < plan.rows(); ++i) {
    for (Eigen::Index k = 0; k < plan.cols(); ++k) {
      for (Eigen::Index j = 0; j < plan.rows(); ++j) {
        for (Eigen::Index l = 0; l < plan.cols(); ++l) {
          const double diff = edges_a(i, j) - edges_l(k, l);
          total += diff * diff * plan(i, k) * plan(j, l);
        }
      }
    }
  }
  return total;
}

double gw_exhaustive(const CostMatrix& edges_a, const CostMatrix& edges_l, double grid_step) {
  const Eigen::Index n = edges_a.rows();
  const Eigen::Index m = edges_l.rows();
  if (n == 2 && m == 2) {
    if (!(grid_step > 0.0)) throw DomainError("grid step must be positive");
    const auto steps = static_cast<long>(std::floor(0.5 / grid_step + 1e-9));
    double best = std::numeric_limits<double>::infinity();
    for (long s = 0; s <= steps; ++s) {
      const double t = std::min(0.5, static_cast<double>(s) * grid_step);
      best = std::min(best, gw_value(edges_a.values(), edges_l.values(), two_by_two(t).plan()));
    }
    // Make sure the far vertex is included even when the step does not divide 1/2.
    return std::min(best, gw_value(edges_a.values(), edges_l.values(), two_by_two(0.5).plan()));
  }
  if (n == m && n <= 4) {
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    double best = std::numeric_limits<double>::infinity();
    do {
      Matrix plan = Matrix::Zero(n, n);
      for (Eigen::Index i = 0; i < n; ++i) plan(i, perm[static_cast<std::size_t>(i)]) = 1.0 / n;
      best = std::min(best, gw_value(edges_a.values(), edges_l.values(), plan));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
  throw SizeError("gw_exhaustive supports 2x2 or n == m <= 4, got " + std::to_string(n) + " and " +
                  std::to_string(m));
}

}  // namespace gmot::oracle
