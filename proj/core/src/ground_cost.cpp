// SPDX-License-Identifier: Apache-2.0

#include "gmot/ground_cost.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gmot {
namespace {

double cosine_distance(const Eigen::Ref<const Eigen::RowVectorXd>& x, double x_norm,
                       const Eigen::Ref<const Eigen::RowVectorXd>& y, double y_norm) {
  const double cos = std::clamp(x.dot(y) / (x_norm * y_norm), -1.0, 1.0);
  // Identical rows are at distance exactly 0; the quotient can miss 1 by an ulp.
  if (cos > 1.0 - 1e-12 && x == y) return 0.0;
  return 1.0 - cos;
}

Vector row_norms(const FeatureSequence& f) {
  Vector norms = f.values().rowwise().norm();
  // FeatureSequence already rejects zero rows; keep the hard check in case
  // the norm underflows for tiny but nonzero rows.
  for (Eigen::Index i = 0; i < norms.size(); ++i) {
    if (!(norms[i] > 0.0)) throw DomainError("feature row " + std::to_string(i) + " has zero norm");
  }
  return norms;
}

double position(std::size_t index_1based, std::size_t length, bool centered) {
  if (!centered) return static_cast<double>(index_1based) / static_cast<double>(length);
  if (length == 1) return 0.0;
  return static_cast<double>(index_1based - 1) / static_cast<double>(length - 1);
}

}  // namespace

CostMatrix cross_modal_cost(const FeatureSequence& acoustic, const FeatureSequence& linguistic) {
  if (acoustic.dim() != linguistic.dim()) {
    throw ShapeError("feature dimensions differ: " + std::to_string(acoustic.dim()) + " vs " +
                     std::to_string(linguistic.dim()));
  }
  const Vector na = row_norms(acoustic);
  const Vector nl = row_norms(linguistic);
  Matrix d(acoustic.rows(), linguistic.rows());
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
      d(i, j) = cosine_distance(acoustic.row(i), na[i], linguistic.row(j), nl[j]);
    }
  }
  return CostMatrix(std::move(d), CostKind::kCrossModal);
}

CostMatrix intra_modal_cost(const FeatureSequence& features) {
  const Vector n = row_norms(features);
  const Eigen::Index len = features.rows();
  Matrix d = Matrix::Zero(len, len);
  for (Eigen::Index i = 0; i < len; ++i) {
    for (Eigen::Index j = i + 1; j < len; ++j) {
      d(i, j) = cosine_distance(features.row(i), n[i], features.row(j), n[j]);
      d(j, i) = d(i, j);
    }
  }
  return CostMatrix(std::move(d), CostKind::kIntraModal);
}

CostMatrix temporal_prior(std::size_t acoustic_len, std::size_t linguistic_len, bool centered) {
  if (acoustic_len == 0 || linguistic_len == 0) {
    throw SizeError("temporal prior needs nonzero lengths");
  }
  Matrix d(static_cast<Eigen::Index>(acoustic_len), static_cast<Eigen::Index>(linguistic_len));
  for (std::size_t i = 1; i <= acoustic_len; ++i) {
    const double pi = position(i, acoustic_len, centered);
    for (std::size_t j = 1; j <= linguistic_len; ++j) {
      const double gap = pi - position(j, linguistic_len, centered);
      d(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j - 1)) = gap * gap;
    }
  }
  return CostMatrix(std::move(d), CostKind::kTemporal);
}

CostMatrix blend_temporal(const CostMatrix& cross, const CostMatrix& temporal, double rho) {
  if (cross.rows() != temporal.rows() || cross.cols() != temporal.cols()) {
    throw ShapeError("blend_temporal: cost is " + std::to_string(cross.rows()) + "x" +
                     std::to_string(cross.cols()) + ", temporal prior is " +
                     std::to_string(temporal.rows()) + "x" + std::to_string(temporal.cols()));
  }
  if (cross.kind() != CostKind::kCrossModal || temporal.kind() != CostKind::kTemporal) {
    throw ShapeError("blend_temporal expects a cross-modal cost and a temporal prior");
  }
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw DomainError("rho must be nonnegative");
  if (rho == 0.0) return CostMatrix(cross.values(), CostKind::kCrossModal);
  return CostMatrix(cross.values() + rho * temporal.values(), CostKind::kCrossModal);
}

}  // namespace gmot
