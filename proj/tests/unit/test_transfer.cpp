// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "gmot/transfer.hpp"
#include "test_support.hpp"

namespace gmot {
namespace {

TEST(Project, IdentityCouplingBarycentricIsIdentity) {
  testing::Rng rng(61);
  const FeatureSequence h = testing::random_features(rng, 6, 3);
  const Coupling id(Matrix(Matrix::Identity(6, 6) / 6.0), uniform_marginal(6), uniform_marginal(6));
  const FeatureSequence z = project(id, h);
  EXPECT_LE((z.values() - h.values()).cwiseAbs().maxCoeff(), 1e-15);
  const FeatureSequence raw = project(id, h, ProjectionMode::kRaw);
  EXPECT_LE((raw.values() - h.values() / 6.0).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Project, AveragesSegments) {
  Matrix hv(4, 2);
  hv << 1, 0, 3, 0, 0, 2, 0, 4;
  Matrix plan(4, 2);
  plan << 0.25, 0, 0.25, 0, 0, 0.25, 0, 0.25;
  const FeatureSequence z = project(Coupling(plan, uniform_marginal(4), uniform_marginal(2)), FeatureSequence(hv));
  Matrix expected(2, 2);
  expected << 2, 0, 0, 3;
  EXPECT_LE((z.values() - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Project, ShapeMismatch) {
  testing::Rng rng(62);
  const Coupling id(Matrix(Matrix::Identity(3, 3) / 3.0), uniform_marginal(3), uniform_marginal(3));
  EXPECT_THROW(project(id, testing::random_features(rng, 4, 2)), ShapeError);
}

TEST(AlignmentLoss, Examples) {
  Matrix a(3, 2), b(3, 2);
  a << 1, 0, 1, 0, 1, 0;
  b << 5, 5, 0, 1, -1, 0;
  // Only the middle row counts with the default trims: 1 - cos = 1.
  EXPECT_NEAR(alignment_loss(FeatureSequence(a), FeatureSequence(b)), 1.0, 1e-15);
  // Untrimmed: (1 - 1/sqrt2) + 1 + 2.
  EXPECT_NEAR(alignment_loss(FeatureSequence(a), FeatureSequence(b), 0, 0), 4.0 - 1.0 / std::sqrt(2.0),
              1e-15);
  EXPECT_EQ(alignment_loss(FeatureSequence(a), FeatureSequence(a), 0, 0), 0.0);
}

TEST(AlignmentLoss, Errors) {
  testing::Rng rng(63);
  const FeatureSequence x = testing::random_features(rng, 3, 2);
  EXPECT_THROW(alignment_loss(x, testing::random_features(rng, 4, 2)), ShapeError);
  EXPECT_THROW(alignment_loss(x, testing::random_features(rng, 3, 3)), ShapeError);
  EXPECT_THROW(alignment_loss(x, x, 2, 1), SizeError);
  EXPECT_THROW(alignment_loss(x, x, 0, 3), SizeError);
}

TEST(FuseRepresentation, ZeroScaleReturnsEncoder) {
  testing::Rng rng(64);
  const FeatureSequence enc = testing::random_features(rng, 5, 3);
  const FeatureSequence aligned = testing::random_features(rng, 5, 4);
  const FusionWeights w = FusionWeights::with_projection(testing::random_matrix(rng, 4, 3), 0.0);
  EXPECT_EQ(fuse_representation(enc, aligned, w).values(), enc.values());
}

TEST(FuseRepresentation, MatchesHandComputation) {
  Matrix e(1, 2), z(1, 2);
  e << 1, 1;
  z << 1, 3;
  // LN_pre([1, 3]) = [-1, 1] / sqrt(1 + eps); identity projection; LN_post
  // of that is again ~[-1, 1].
  const FusionWeights w = FusionWeights::with_projection(Matrix::Identity(2, 2), 0.1);
  const FeatureSequence out = fuse_representation(FeatureSequence(e), FeatureSequence(z), w);
  const double eps = 1e-5;
  const double pre = 1.0 / std::sqrt(1.0 + eps);
  const double post = pre / std::sqrt(pre * pre + eps);
  EXPECT_NEAR(out.values()(0, 0), 1.0 - 0.1 * post, 1e-14);
  EXPECT_NEAR(out.values()(0, 1), 1.0 + 0.1 * post, 1e-14);
}

TEST(FuseRepresentation, ShapeErrors) {
  testing::Rng rng(65);
  const FusionWeights w = FusionWeights::with_projection(testing::random_matrix(rng, 4, 3), 0.1);
  EXPECT_THROW(fuse_representation(testing::random_features(rng, 5, 3), testing::random_features(rng, 4, 4), w),
               ShapeError);
  EXPECT_THROW(fuse_representation(testing::random_features(rng, 5, 2), testing::random_features(rng, 5, 4), w),
               ShapeError);
}

TEST(TotalLoss, Combination) {
  EXPECT_EQ(total_loss(1.0, 2.0, 3.0, 0.3), 0.3 * 1.0 + 0.7 * 5.0);
  EXPECT_EQ(total_loss(2.0, 7.0, 1.0, 1.0), 2.0);
  EXPECT_EQ(total_loss(2.0, 7.0, 1.0, 0.0), 8.0);
  EXPECT_THROW(total_loss(1, 1, 1, 1.2), DomainError);
  EXPECT_THROW(total_loss(1, 1, 1, -0.1), DomainError);
}

}  // namespace
}  // namespace gmot
