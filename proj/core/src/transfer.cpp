// SPDX-License-Identifier: Apache-2.0

#include "gmot/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gmot {
namespace {

Eigen::RowVectorXd layer_norm(const Eigen::RowVectorXd& x, const Vector& gain, const Vector& bias,
                              double eps) {
  const double mean = x.mean();
  const Eigen::RowVectorXd centered = x.array() - mean;
  const double var = centered.squaredNorm() / static_cast<double>(x.size());
  const double inv = 1.0 / std::sqrt(var + eps);
  return (centered * inv).cwiseProduct(gain.transpose()) + bias.transpose();
}

void check_length(const Vector& v, Eigen::Index expected, const char* name) {
  if (v.size() != expected) {
    throw ShapeError(std::string("fusion weight ") + name + " has length " +
                     std::to_string(v.size()) + ", expected " + std::to_string(expected));
  }
}

}  // namespace

FeatureSequence project(const Coupling& coupling, const FeatureSequence& source,
                        ProjectionMode mode) {
  if (coupling.rows() != source.rows()) {
    throw ShapeError("coupling has " + std::to_string(coupling.rows()) + " rows, source has " +
                     std::to_string(source.rows()));
  }
  if (mode == ProjectionMode::kRaw) {
    return FeatureSequence(Matrix(coupling.plan().transpose() * source.values()));
  }
  // Normalize the columns first so a column holding a single cell passes its
  // source row through unchanged.
  Matrix weights = coupling.plan();
  const Vector mass = weights.colwise().sum().transpose();
  for (Eigen::Index j = 0; j < mass.size(); ++j) {
    if (!(mass[j] > 0.0)) throw DomainError("coupling column " + std::to_string(j) + " carries no mass");
    weights.col(j) /= mass[j];
  }
  Matrix projected = weights.transpose() * source.values();
  return FeatureSequence(std::move(projected));
}

double alignment_loss(const FeatureSequence& projected, const FeatureSequence& target,
                      std::size_t trim_head, std::size_t trim_tail) {
  if (projected.rows() != target.rows() || projected.dim() != target.dim()) {
    throw ShapeError("alignment_loss: shapes differ (" + std::to_string(projected.rows()) + "x" +
                     std::to_string(projected.dim()) + " vs " + std::to_string(target.rows()) +
                     "x" + std::to_string(target.dim()) + ")");
  }
  const auto len = static_cast<std::size_t>(target.rows());
  if (trim_head + trim_tail >= len) {
    throw SizeError("trimming " + std::to_string(trim_head) + "+" + std::to_string(trim_tail) +
                    " rows leaves nothing of " + std::to_string(len));
  }
  double loss = 0.0;
  for (std::size_t j = trim_head; j < len - trim_tail; ++j) {
    const auto r = static_cast<Eigen::Index>(j);
    const double np = projected.row(r).norm();
    const double nt = target.row(r).norm();
    if (!(np > 0.0) || !(nt > 0.0)) {
      throw DomainError("alignment_loss: row " + std::to_string(j) + " has zero norm");
    }
    if (projected.row(r) == target.row(r)) continue;
    const double cos = std::clamp(projected.row(r).dot(target.row(r)) / (np * nt), -1.0, 1.0);
    loss += 1.0 - cos;
  }
  return loss;
}

FusionWeights FusionWeights::with_projection(Matrix projection, double scale) {
  FusionWeights w;
  const Eigen::Index dt = projection.rows();
  const Eigen::Index da = projection.cols();
  w.projection = std::move(projection);
  w.projection_bias = Vector::Zero(da);
  w.pre_gain = Vector::Ones(dt);
  w.pre_bias = Vector::Zero(dt);
  w.post_gain = Vector::Ones(da);
  w.post_bias = Vector::Zero(da);
  w.scale = scale;
  return w;
}

FeatureSequence fuse_representation(const FeatureSequence& encoder, const FeatureSequence& aligned,
                                    const FusionWeights& weights) {
  if (encoder.rows() != aligned.rows()) {
    throw ShapeError("encoder and aligned sequences have different lengths");
  }
  const Eigen::Index dt = aligned.dim();
  const Eigen::Index da = encoder.dim();
  if (weights.projection.rows() != dt || weights.projection.cols() != da) {
    throw ShapeError("fusion projection is " + std::to_string(weights.projection.rows()) + "x" +
                     std::to_string(weights.projection.cols()) + ", expected " +
                     std::to_string(dt) + "x" + std::to_string(da));
  }
  check_length(weights.projection_bias, da, "projection_bias");
  check_length(weights.pre_gain, dt, "pre_gain");
  check_length(weights.pre_bias, dt, "pre_bias");
  check_length(weights.post_gain, da, "post_gain");
  check_length(weights.post_bias, da, "post_bias");
  if (!(weights.eps > 0.0)) throw DomainError("layer-norm eps must be positive");
  if (!std::isfinite(weights.scale) || !weights.projection.allFinite()) {
    throw DomainError("fusion weights must be finite");
  }

  Matrix out = encoder.values();
  if (weights.scale == 0.0) return FeatureSequence(std::move(out));
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const Eigen::RowVectorXd pre =
        layer_norm(aligned.row(i), weights.pre_gain, weights.pre_bias, weights.eps);
    const Eigen::RowVectorXd hidden = pre * weights.projection + weights.projection_bias.transpose();
    out.row(i) += weights.scale *
                  layer_norm(hidden, weights.post_gain, weights.post_bias, weights.eps);
  }
  return FeatureSequence(std::move(out));
}

double total_loss(double ctc, double align, double fgwd, double lambda) {
  if (!std::isfinite(ctc) || !std::isfinite(align) || !std::isfinite(fgwd)) {
    throw DomainError("total_loss: non-finite loss term");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("lambda must lie in [0, 1]");
  return lambda * ctc + (1.0 - lambda) * (align + fgwd);
}

}  // namespace gmot
