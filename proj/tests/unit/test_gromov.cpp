// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <numeric>

#include <gtest/gtest.h>

#include "gmot/gromov.hpp"
#include "gmot/oracle.hpp"
#include "test_support.hpp"

namespace gmot {
namespace {

CostMatrix two_point(double distance) {
  Matrix d(2, 2);
  d << 0, distance, distance, 0;
  return CostMatrix(d, CostKind::kIntraModal);
}

Coupling diag_coupling(Eigen::Index n) {
  return Coupling(Matrix(Matrix::Identity(n, n) / static_cast<double>(n)), uniform_marginal(n),
                  uniform_marginal(n));
}

Coupling two_by_two(double t) {
  Matrix p(2, 2);
  p << t, 0.5 - t, 0.5 - t, t;
  return Coupling(p, uniform_marginal(2), uniform_marginal(2));
}

// Points on a line at distinct, irregular spacings give an intra-modal cost
// with all pairwise distances distinct.
CostMatrix distinct_space(testing::Rng& rng, Eigen::Index n) {
  while (true) {
    const CostMatrix d = testing::random_intra_cost(rng, n, 3);
    std::vector<double> off;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) off.push_back(d(i, j));
    std::sort(off.begin(), off.end());
    bool distinct = true;
    for (std::size_t k = 1; k < off.size(); ++k) distinct = distinct && off[k] - off[k - 1] > 0.02;
    if (distinct && (off.empty() || off.front() > 0.05)) return d;
  }
}

TEST(GwLinearizedCost, TwoPointSelfMatching) {
  // M_ik = sum_jl |dA_ij - dL_kl|^2 gamma_jl with gamma = I/2 and both spaces
  // at distance 1: M_00 = M_11 = 0, M_01 = M_10 = (1 + 1) / 2 = 1.
  const CostMatrix d = two_point(1.0);
  Matrix expected(2, 2);
  expected << 0, 1, 1, 0;
  for (GwKernel kernel : {GwKernel::kNaive, GwKernel::kFast}) {
    const CostMatrix m = gw_linearized_cost(d, d, diag_coupling(2), kernel);
    EXPECT_LE((m.values() - expected).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(GwLinearizedCost, ZeroPlanGivesZero) {
  testing::Rng rng(21);
  const Matrix da = testing::random_intra_cost(rng, 4).values();
  const Matrix dl = testing::random_intra_cost(rng, 3).values();
  EXPECT_EQ(gw_linearized_cost(da, dl, Matrix::Zero(4, 3)), Matrix::Zero(4, 3));
  EXPECT_EQ(gw_linearized_cost(da, dl, Matrix::Zero(4, 3), GwKernel::kNaive), Matrix::Zero(4, 3));
}

TEST(GwLinearizedCost, SinglePoint) {
  const CostMatrix z(Matrix::Zero(1, 1), CostKind::kIntraModal);
  const Coupling one(Matrix::Ones(1, 1), uniform_marginal(1), uniform_marginal(1));
  EXPECT_EQ(gw_linearized_cost(z, z, one).values()(0, 0), 0.0);
}

TEST(GwLinearizedCost, FastMatchesNaive) {
  testing::Rng rng(22);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index la = testing::random_size(rng, 1, 12);
    const Eigen::Index lt = testing::random_size(rng, 1, 12);
    const Matrix da = testing::random_intra_cost(rng, la).values();
    const Matrix dl = testing::random_intra_cost(rng, lt).values();
    const Matrix plan = testing::random_matrix(rng, la, lt, 0.0, 1.0);
    const Matrix fast = gw_linearized_cost(da, dl, plan, GwKernel::kFast);
    const Matrix naive = gw_linearized_cost(da, dl, plan, GwKernel::kNaive);
    EXPECT_LE((fast - naive).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(GwLinearizedCost, ShapeErrors) {
  testing::Rng rng(23);
  const CostMatrix da = testing::random_intra_cost(rng, 3);
  const CostMatrix dl = testing::random_intra_cost(rng, 2);
  EXPECT_THROW(gw_linearized_cost(da.values(), dl.values(), Matrix::Zero(2, 2)), ShapeError);
  const CostMatrix cross(Matrix::Zero(3, 2), CostKind::kCrossModal);
  EXPECT_THROW(gw_linearized_cost(cross, dl, two_by_two(0.25)), ShapeError);
}

TEST(GwObjective, SelfMatchingIsExactlyZero) {
  testing::Rng rng(24);
  for (Eigen::Index n = 1; n <= 8; ++n) {
    const CostMatrix d = testing::random_intra_cost(rng, n);
    EXPECT_EQ(gw_objective(d, d, diag_coupling(n)), 0.0);
  }
}

TEST(GwObjective, TwoPointPolynomial) {
  // dA off-diagonal 1, dL off-diagonal 3, gamma(t) = [[t, s], [s, t]] with
  // s = 1/2 - t. Summing the four index cases gives
  //   GW(t) = 4 (2t^2 + 2s^2) + 9 (4ts) + 1 (4ts) = 2 + 24 t s,
  // so GW(1/4) = 3.5 and the minimum over t is 2 at t in {0, 1/2}.
  const CostMatrix da = two_point(1.0);
  const CostMatrix dl = two_point(3.0);
  EXPECT_NEAR(gw_objective(da, dl, two_by_two(0.25)), 3.5, 1e-14);
  EXPECT_NEAR(oracle::gw_value(da.values(), dl.values(), two_by_two(0.25).plan()), 3.5, 1e-14);
  for (double t : {0.0, 0.1, 0.3, 0.5}) {
    EXPECT_NEAR(gw_objective(da, dl, two_by_two(t)), 2.0 + 24.0 * t * (0.5 - t), 1e-13);
  }
  EXPECT_NEAR(oracle::gw_exhaustive(da, dl, 1e-4), 2.0, 1e-12);
}

TEST(GwObjective, PermutationIsometryInvariance) {
  testing::Rng rng(25);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index n = testing::random_size(rng, 2, 8);
    const CostMatrix da = testing::random_intra_cost(rng, n);
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    const Matrix p = testing::permutation_matrix(perm);
    const CostMatrix dl(p.transpose() * da.values() * p, CostKind::kIntraModal);
    const Coupling coupling(p / static_cast<double>(n), uniform_marginal(n), uniform_marginal(n));
    EXPECT_EQ(gw_objective(da, dl, coupling), 0.0);
  }
}

TEST(GwObjective, NonnegativeAndMatchesBruteForce) {
  testing::Rng rng(26);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index la = testing::random_size(rng, 1, 7);
    const Eigen::Index lt = testing::random_size(rng, 1, 7);
    const Matrix da = testing::random_intra_cost(rng, la).values();
    const Matrix dl = testing::random_intra_cost(rng, lt).values();
    Matrix plan = testing::random_matrix(rng, la, lt, 0.0, 1.0);
    plan /= plan.sum();
    const double value = gw_objective(da, dl, plan);
    EXPECT_GE(value, 0.0);
    EXPECT_NEAR(value, oracle::gw_value(da, dl, plan), 1e-12);
  }
}

TEST(StaircasePlan, IdentityForEqualUniform) {
  const Matrix p = staircase_plan(uniform_marginal(5), uniform_marginal(5));
  EXPECT_EQ(p, Matrix(Matrix::Identity(5, 5) / 5.0));
  const Matrix q = staircase_plan(uniform_marginal(6), uniform_marginal(3));
  EXPECT_LE(marginal_violation(q, uniform_marginal(6), uniform_marginal(3)), 1e-15);
}

TEST(InitialPlan, BandIsFeasibleAndBanded) {
  SolverConfig cfg;
  cfg.init = InitMode::kIdentityBand;
  cfg.band_width = 2;
  const Marginal a = uniform_marginal(12);
  const Marginal b = uniform_marginal(5);
  const Matrix p = initial_plan(a, b, cfg);
  EXPECT_LE(marginal_violation(p, a, b), 1e-9);
  EXPECT_EQ(p(0, 4), 0.0);
  EXPECT_EQ(p(11, 0), 0.0);
}

TEST(GwdSolve, SingletonIsPointMass) {
  const CostMatrix z(Matrix::Zero(1, 1), CostKind::kIntraModal);
  const GromovResult r = gwd_solve(z, z, uniform_marginal(1), uniform_marginal(1), SolverConfig{});
  EXPECT_EQ(r.coupling(0, 0), 1.0);
  EXPECT_EQ(r.objective, 0.0);
}

TEST(GwdSolve, SelfMatchingFromIdentityBand) {
  testing::Rng rng(27);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index n = testing::random_size(rng, 2, 8);
    const CostMatrix d = distinct_space(rng, n);
    SolverConfig cfg;
    cfg.init = InitMode::kIdentityBand;
    cfg.beta = 1e-3;
    const GromovResult r = gwd_solve(d, d, uniform_marginal(n), uniform_marginal(n), cfg);
    EXPECT_LE(r.objective, 1e-4);
    const Matrix identity = Matrix::Identity(n, n) / static_cast<double>(n);
    EXPECT_LE((r.coupling.plan() - identity).cwiseAbs().maxCoeff(), 1e-3);
  }
}

TEST(GwdSolve, RecoversPermutedSelfMatching) {
  testing::Rng rng(28);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index n = testing::random_size(rng, 2, 6);
    const CostMatrix da = distinct_space(rng, n);
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    const Matrix p = testing::permutation_matrix(perm);
    const CostMatrix dl(p.transpose() * da.values() * p, CostKind::kIntraModal);
    const Marginal u = uniform_marginal(n);
    const Matrix start = 0.5 * (u.weights() * u.weights().transpose()) + 0.5 * p / static_cast<double>(n);
    SolverConfig cfg;
    cfg.beta = 0.005;
    cfg.init = InitMode::kUserSupplied;
    cfg.initial_coupling = Coupling(start, u, u);
    const GromovResult r = gwd_solve(da, dl, u, u, cfg);
    EXPECT_LE(r.objective, 1e-3) << "n=" << n;
  }
}

TEST(GwdSolve, TraceNonincreasing) {
  testing::Rng rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index la = testing::random_size(rng, 2, 20);
    const Eigen::Index lt = testing::random_size(rng, 2, 8);
    SolverConfig cfg;
    cfg.beta = 0.05;
    const GromovResult r = gwd_solve(testing::random_intra_cost(rng, la), testing::random_intra_cost(rng, lt),
                                     uniform_marginal(la), uniform_marginal(lt), cfg);
    const auto& trace = r.diagnostics.objective_trace;
    for (std::size_t k = 1; k < trace.size(); ++k) EXPECT_LE(trace[k], trace[k - 1] + 1e-9);
    EXPECT_TRUE(validate_coupling(r.coupling, cfg.marginal_tol).passed);
  }
}

TEST(GwdSolve, ProximalStepAlsoDescends) {
  testing::Rng rng(30);
  SolverConfig cfg;
  cfg.beta = 0.1;
  cfg.outer_step = OuterStep::kProximal;
  const GromovResult r = gwd_solve(testing::random_intra_cost(rng, 15), testing::random_intra_cost(rng, 6),
                                   uniform_marginal(15), uniform_marginal(6), cfg);
  const auto& trace = r.diagnostics.objective_trace;
  for (std::size_t k = 1; k < trace.size(); ++k) EXPECT_LE(trace[k], trace[k - 1] + 1e-9);
  EXPECT_LE(r.diagnostics.final_marginal_violation, cfg.marginal_tol);
}

}  // namespace
}  // namespace gmot
