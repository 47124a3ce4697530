// SPDX-License-Identifier: Apache-2.0
//
// Consumers of a solved coupling: projection of acoustic features onto the
// token axis, the cosine alignment loss, the fusion transform and the total
// training loss. Everything here is forward-only.

#pragma once

#include <cstddef>

#include "gmot/types.hpp"

namespace gmot {

enum class ProjectionMode {
  kRaw,          // gamma^T H
  kBarycentric,  // gamma^T H, row j divided by the coupling's column sum j
};

/// Projects H (l_a x d) through gamma (l_a x l_t) to an l_t x d sequence.
/// Barycentric mode throws DomainError on a column with zero mass.
FeatureSequence project(const Coupling& coupling, const FeatureSequence& source,
                        ProjectionMode mode = ProjectionMode::kBarycentric);

/// sum over rows j in [trim_head, l_t - trim_tail) of 1 - cos(projected_j, target_j).
/// The default trims drop one leading and one trailing special token.
double alignment_loss(const FeatureSequence& projected, const FeatureSequence& target,
                      std::size_t trim_head = 1, std::size_t trim_tail = 1);

struct FusionWeights {
  Matrix projection;  // d_t x d_a
  Vector projection_bias;  // d_a
  Vector pre_gain, pre_bias;    // d_t
  Vector post_gain, post_bias;  // d_a
  double scale = 0.0;           // w_s
  double eps = 1e-5;

  // Identity layer norms, zero bias and the given projection.
  static FusionWeights with_projection(Matrix projection, double scale);
};

/// H_enc + scale * LN_post(LN_pre(H_A) W + bias), applied row by row.
/// Layer norm is (x - mean) / sqrt(var + eps) * gain + bias with the
/// population variance.
FeatureSequence fuse_representation(const FeatureSequence& encoder, const FeatureSequence& aligned,
                                    const FusionWeights& weights);

/// lambda * ctc + (1 - lambda) * (align + fgwd).
double total_loss(double ctc, double align, double fgwd, double lambda);

}  // namespace gmot
