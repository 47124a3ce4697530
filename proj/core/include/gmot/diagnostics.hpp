// SPDX-License-Identifier: Apache-2.0
//
// Scalar summaries of a transport plan used by sweeps and trend checks.

#pragma once

#include <vector>

#include "gmot/types.hpp"

namespace gmot {

inline constexpr double kDefaultBandWidth = 2.0;

/// Total mass on cells with |i/l_a - j/l_t| <= width / max(l_a, l_t),
/// 1-based indices.
double band_mass(const Matrix& plan, double width = kDefaultBandWidth);

/// Hard segmentation of frames to tokens: entry j counts the rows whose
/// largest entry lies in column j (ties go to the lowest column).
std::vector<int> token_durations(const Matrix& plan);

/// Population variance of token_durations across columns.
double duration_variance(const Matrix& plan);

}  // namespace gmot
