// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gmot/types.hpp"

namespace gmot {

/// Cross-modal cosine distance, entry (i, j) = 1 - cos(h_i, z_j), in [0, 2].
CostMatrix cross_modal_cost(const FeatureSequence& acoustic, const FeatureSequence& linguistic);

/// Intra-modal cosine distance. Symmetric by construction with an exact zero
/// diagonal.
CostMatrix intra_modal_cost(const FeatureSequence& features);

/// Squared normalized-position gap |i/l_a - j/l_t|^2 over 1-based indices.
/// With `centered` the positions are (i-1)/(l-1) instead (0 for l == 1).
CostMatrix temporal_prior(std::size_t acoustic_len, std::size_t linguistic_len,
                          bool centered = false);

/// d + rho * d_temporal. The result keeps the cross-modal kind, since it
/// replaces the node cost wherever that cost is used.
CostMatrix blend_temporal(const CostMatrix& cross, const CostMatrix& temporal, double rho);

}  // namespace gmot
