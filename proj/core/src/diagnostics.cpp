// SPDX-License-Identifier: Apache-2.0

#include "gmot/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace gmot {

double band_mass(const Matrix& plan, double width) {
  const auto la = static_cast<double>(plan.rows());
  const auto lt = static_cast<double>(plan.cols());
  const double limit = width / std::max(la, lt);
  double mass = 0.0;
  for (Eigen::Index i = 0; i < plan.rows(); ++i) {
    for (Eigen::Index j = 0; j < plan.cols(); ++j) {
      const double gap = std::abs(static_cast<double>(i + 1) / la - static_cast<double>(j + 1) / lt);
      if (gap <= limit) mass += plan(i, j);
    }
  }
  return mass;
}

std::vector<int> token_durations(const Matrix& plan) {
  std::vector<int> counts(static_cast<std::size_t>(plan.cols()), 0);
  for (Eigen::Index i = 0; i < plan.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < plan.cols(); ++j) {
      if (plan(i, j) > plan(i, best)) best = j;
    }
    ++counts[static_cast<std::size_t>(best)];
  }
  return counts;
}

double duration_variance(const Matrix& plan) {
  const std::vector<int> counts = token_durations(plan);
  double mean = 0.0;
  for (int c : counts) mean += c;
  mean /= static_cast<double>(counts.size());
  double var = 0.0;
  for (int c : counts) var += (c - mean) * (c - mean);
  return var / static_cast<double>(counts.size());
}

}  // namespace gmot
