// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <gtest/gtest.h>

#include "gmot/oracle.hpp"
#include "test_support.hpp"

namespace gmot {
namespace {

double assignment_cost(const Matrix& cost, const std::vector<Eigen::Index>& perm) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < cost.rows(); ++i) s += cost(i, perm[static_cast<std::size_t>(i)]);
  return s;
}

TEST(SolveAssignment, MatchesEnumeration) {
  testing::Rng rng(71);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index n = testing::random_size(rng, 1, 7);
    const Matrix cost = testing::random_matrix(rng, n, n, 0.0, 2.0);
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    double best = std::numeric_limits<double>::infinity();
    do best = std::min(best, assignment_cost(cost, perm));
    while (std::next_permutation(perm.begin(), perm.end()));
    EXPECT_NEAR(assignment_cost(cost, oracle::solve_assignment(cost)), best, 1e-12);
  }
}

TEST(ExactOtAssignment, TwoByThreeMatchesVertexEnumeration) {
  // Uniform 2 x 3 couplings are determined by (x, y) = (gamma_00, gamma_01)
  // with 0 <= x, y <= 1/3 and 1/6 <= x + y <= 1/2. The optimum sits on a
  // vertex of that polygon.
  testing::Rng rng(72);
  const double third = 1.0 / 3.0, sixth = 1.0 / 6.0;
  const double vertices[][2] = {{0, sixth}, {sixth, 0}, {third, 0}, {third, sixth},
                                {sixth, third}, {0, third}};
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix c = testing::random_matrix(rng, 2, 3, 0.0, 2.0);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& v : vertices) {
      Matrix p(2, 3);
      const double x = v[0], y = v[1];
      p << x, y, 0.5 - x - y, third - x, third - y, x + y - sixth;
      best = std::min(best, c.cwiseProduct(p).sum());
    }
    const oracle::ExactTransport r = oracle::exact_ot_assignment(CostMatrix(c, CostKind::kCrossModal), 2, 3);
    EXPECT_NEAR(r.cost, best, 1e-12);
    EXPECT_TRUE(validate_coupling(r.coupling, 1e-12).passed);
  }
}

TEST(ExactOtAssignment, RejectsLargeExpansion) {
  const CostMatrix c(Matrix::Zero(7, 11), CostKind::kCrossModal);
  EXPECT_THROW(oracle::exact_ot_assignment(c, 7, 11), SizeError);
}

TEST(EntropicOt2x2, MatchesClosedForm) {
  // Optimality: t / (1/2 - t) = exp(-c / (2 beta)), c = D00 + D11 - D01 - D10.
  testing::Rng rng(73);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix d = testing::random_matrix(rng, 2, 2, 0.0, 2.0);
    const double beta = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
    const double c = d(0, 0) + d(1, 1) - d(0, 1) - d(1, 0);
    const double t = 0.5 / (1.0 + std::exp(c / (2.0 * beta)));
    const Coupling g = oracle::entropic_ot_2x2(CostMatrix(d, CostKind::kCrossModal), beta);
    EXPECT_NEAR(g(0, 0), t, 1e-12);
    EXPECT_NEAR(g(0, 1), 0.5 - t, 1e-12);
  }
}

TEST(GwExhaustive, PermutationSearch) {
  testing::Rng rng(74);
  const CostMatrix d = testing::random_intra_cost(rng, 4);
  EXPECT_EQ(oracle::gw_exhaustive(d, d, 0.01), 0.0);
  EXPECT_THROW(oracle::gw_exhaustive(testing::random_intra_cost(rng, 5), testing::random_intra_cost(rng, 5), 0.01),
               SizeError);
  EXPECT_THROW(oracle::gw_exhaustive(d, testing::random_intra_cost(rng, 3), 0.01), SizeError);
}

}  // namespace
}  // namespace gmot
