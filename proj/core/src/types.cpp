// SPDX-License-Identifier: Apache-2.0

#include "gmot/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gmot {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage: return "usage";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kShape: return "shape";
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kSize: return "size";
  }
  return "unknown";
}

std::string_view to_string(CostKind kind) {
  switch (kind) {
    case CostKind::kCrossModal: return "cross-modal";
    case CostKind::kIntraModal: return "intra-modal";
    case CostKind::kTemporal: return "temporal";
    case CostKind::kFused: return "fused";
  }
  return "unknown";
}

std::string_view to_string(InitMode mode) {
  switch (mode) {
    case InitMode::kProduct: return "product";
    case InitMode::kIdentityBand: return "identity-band";
    case InitMode::kUserSupplied: return "user-supplied";
  }
  return "unknown";
}

std::string_view to_string(OuterStep step) {
  switch (step) {
    case OuterStep::kEntropic: return "entropic";
    case OuterStep::kProximal: return "proximal";
  }
  return "unknown";
}

FeatureSequence::FeatureSequence(Matrix values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw SizeError("feature sequence needs at least one row and one column, got " +
                    std::to_string(values_.rows()) + "x" + std::to_string(values_.cols()));
  }
  if (!values_.allFinite()) {
    throw DomainError("feature sequence contains a non-finite entry");
  }
  for (Eigen::Index i = 0; i < values_.rows(); ++i) {
    if (!(values_.row(i).norm() > 0.0)) {
      throw DomainError("feature row " + std::to_string(i) + " has zero norm");
    }
  }
}

Marginal::Marginal(Vector weights) : weights_(std::move(weights)) {
  if (weights_.size() < 1) throw SizeError("marginal must have at least one weight");
  for (Eigen::Index i = 0; i < weights_.size(); ++i) {
    if (!std::isfinite(weights_[i]) || !(weights_[i] > 0.0)) {
      throw DomainError("marginal weight " + std::to_string(i) + " is not strictly positive");
    }
  }
  const double total = weights_.sum();
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw DomainError("marginal weights sum to " + std::to_string(total) + ", expected 1");
  }
}

Marginal uniform_marginal(std::size_t length) {
  if (length == 0) throw SizeError("uniform marginal of length 0");
  return Marginal(Vector::Constant(static_cast<Eigen::Index>(length),
                                   1.0 / static_cast<double>(length)));
}

CostMatrix::CostMatrix(Matrix values, CostKind kind) : values_(std::move(values)), kind_(kind) {
  if (values_.rows() < 1 || values_.cols() < 1) throw SizeError("empty cost matrix");
  if (!values_.allFinite()) throw DomainError("cost matrix contains a non-finite entry");
  if (values_.minCoeff() < 0.0) throw DomainError("cost matrix contains a negative entry");
  if (kind_ == CostKind::kIntraModal) {
    if (values_.rows() != values_.cols()) {
      throw ShapeError("intra-modal cost must be square, got " + std::to_string(values_.rows()) +
                       "x" + std::to_string(values_.cols()));
    }
    for (Eigen::Index i = 0; i < values_.rows(); ++i) {
      if (values_(i, i) != 0.0) throw DomainError("intra-modal cost has a nonzero diagonal");
      for (Eigen::Index j = i + 1; j < values_.cols(); ++j) {
        if (std::abs(values_(i, j) - values_(j, i)) > kSymmetryTolerance) {
          throw DomainError("intra-modal cost is not symmetric");
        }
      }
    }
  }
}

Coupling::Coupling(Matrix plan, Marginal row_marginal, Marginal col_marginal)
    : plan_(std::move(plan)),
      row_marginal_(std::move(row_marginal)),
      col_marginal_(std::move(col_marginal)) {
  if (plan_.rows() != row_marginal_.size() || plan_.cols() != col_marginal_.size()) {
    throw ShapeError("coupling is " + std::to_string(plan_.rows()) + "x" +
                     std::to_string(plan_.cols()) + " but marginals have lengths " +
                     std::to_string(row_marginal_.size()) + " and " +
                     std::to_string(col_marginal_.size()));
  }
  if (!plan_.allFinite()) throw DomainError("coupling contains a non-finite entry");
  if (plan_.minCoeff() < 0.0) throw DomainError("coupling contains a negative entry");
}

Coupling Coupling::from_plan(Matrix plan) {
  if (plan.rows() < 1 || plan.cols() < 1) throw SizeError("empty coupling");
  if (!plan.allFinite()) throw DomainError("coupling contains a non-finite entry");
  if (plan.minCoeff() < 0.0) throw DomainError("coupling contains a negative entry");
  const double total = plan.sum();
  Vector rows = plan.rowwise().sum();
  Vector cols = plan.colwise().sum().transpose();
  if (!(rows.minCoeff() > 0.0)) throw DomainError("coupling has a row with zero mass");
  if (!(cols.minCoeff() > 0.0)) throw DomainError("coupling has a column with zero mass");
  rows /= total;
  cols /= total;
  return Coupling(std::move(plan), Marginal(std::move(rows)), Marginal(std::move(cols)));
}

CouplingReport validate_coupling(const Coupling& coupling, double tol) {
  const Matrix& plan = coupling.plan();
  CouplingReport report;
  const Vector rows = plan.rowwise().sum();
  const Vector cols = plan.colwise().sum().transpose();
  report.max_row_violation = (rows - coupling.row_marginal().weights()).cwiseAbs().maxCoeff();
  report.max_col_violation = (cols - coupling.col_marginal().weights()).cwiseAbs().maxCoeff();
  report.min_entry = plan.minCoeff();
  report.passed = report.max_row_violation <= tol && report.max_col_violation <= tol &&
                  report.min_entry >= 0.0;
  return report;
}

void SolverConfig::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be positive");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw DomainError("rho must be nonnegative");
  if (max_inner_iters < 1) throw DomainError("max_inner_iters must be at least 1");
  if (max_outer_iters < 1) throw DomainError("max_outer_iters must be at least 1");
  if (!(marginal_tol > 0.0)) throw DomainError("marginal_tol must be positive");
  if (!(objective_rel_tol > 0.0)) throw DomainError("objective_rel_tol must be positive");
  if (band_width < 0) throw DomainError("band_width must be nonnegative");
  if (init == InitMode::kUserSupplied && !initial_coupling) {
    throw DomainError("user-supplied initialization requested without a coupling");
  }
}

}  // namespace gmot
