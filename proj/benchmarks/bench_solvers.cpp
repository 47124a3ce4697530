// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <benchmark/benchmark.h>

#include "gmot/fused.hpp"
#include "gmot/ground_cost.hpp"

namespace {

using namespace gmot;

FeatureSequence features(std::uint64_t seed, Eigen::Index rows, Eigen::Index dim) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(rows, dim);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = g(rng);
  return FeatureSequence(std::move(m));
}

void BM_Sinkhorn(benchmark::State& state) {
  const Eigen::Index la = state.range(0);
  const Eigen::Index lt = la / 4;
  const CostMatrix d = cross_modal_cost(features(1, la, 32), features(2, lt, 32));
  SolverConfig cfg;
  cfg.beta = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sinkhorn_solve(d, uniform_marginal(la), uniform_marginal(lt), cfg));
  }
}
BENCHMARK(BM_Sinkhorn)->Arg(64)->Arg(256)->Arg(1024);

void BM_GwKernel(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const auto kernel = state.range(1) == 0 ? GwKernel::kFast : GwKernel::kNaive;
  const Matrix da = intra_modal_cost(features(3, n, 16)).values();
  const Matrix dl = intra_modal_cost(features(4, n / 2, 16)).values();
  const Matrix plan = Matrix::Constant(n, n / 2, 1.0 / static_cast<double>(n * (n / 2)));
  for (auto _ : state) benchmark::DoNotOptimize(gw_linearized_cost(da, dl, plan, kernel));
}
BENCHMARK(BM_GwKernel)->ArgsProduct({{8, 16, 32}, {0, 1}});

void BM_Fgwd(benchmark::State& state) {
  const Eigen::Index la = state.range(0);
  const FeatureSequence h = features(5, la, 32);
  const FeatureSequence z = features(6, la / 4, 32);
  SolverConfig cfg;
  cfg.alpha = 0.1;
  cfg.rho = 0.5;
  cfg.beta = 0.3;
  for (auto _ : state) benchmark::DoNotOptimize(align_sequences(h, z, cfg));
}
BENCHMARK(BM_Fgwd)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
