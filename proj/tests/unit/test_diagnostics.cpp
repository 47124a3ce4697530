// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "gmot/diagnostics.hpp"

namespace gmot {
namespace {

TEST(BandMass, DiagonalPlanIsFullyInBand) {
  EXPECT_NEAR(band_mass(Matrix::Identity(8, 8) / 8.0), 1.0, 1e-15);
}

TEST(BandMass, AntiDiagonalCorners) {
  Matrix p = Matrix::Zero(10, 10);
  p(0, 9) = 0.5;
  p(9, 0) = 0.5;
  EXPECT_EQ(band_mass(p), 0.0);
  // |1/10 - 3/10| = 0.2 <= 2/10 is inside, |1/10 - 4/10| is not.
  Matrix q = Matrix::Zero(10, 10);
  q(0, 2) = 0.3;
  q(0, 3) = 0.7;
  EXPECT_NEAR(band_mass(q), 0.3, 1e-15);
  EXPECT_NEAR(band_mass(q, 3.5), 1.0, 1e-15);
}

TEST(TokenDurations, CountsArgmax) {
  Matrix p(5, 3);
  p << 0.2, 0.1, 0.0,
       0.1, 0.1, 0.0,  // tie: lowest column
       0.0, 0.3, 0.1,
       0.0, 0.1, 0.2,
       0.0, 0.0, 0.2;
  const std::vector<int> d = token_durations(p);
  EXPECT_EQ(d, (std::vector<int>{2, 1, 2}));
  // mean 5/3, variance (1/9 + 4/9 + 1/9) / 3 = 2/9
  EXPECT_NEAR(duration_variance(p), 2.0 / 9.0, 1e-15);
}

TEST(TokenDurations, EvenSplitHasZeroVariance) {
  Matrix p = Matrix::Zero(6, 3);
  for (int i = 0; i < 6; ++i) p(i, i / 2) = 1.0 / 6.0;
  EXPECT_EQ(duration_variance(p), 0.0);
}

}  // namespace
}  // namespace gmot
