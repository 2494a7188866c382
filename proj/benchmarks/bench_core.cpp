#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "pdcov/dcov.hpp"
#include "pdcov/lasso.hpp"
#include "pdcov/rng.hpp"

using namespace pdcov;

namespace {

Eigen::MatrixXd gaussian(Index rows, Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) m(r, c) = rng.normal();
  }
  return m;
}

void BM_PairwiseDistances(benchmark::State& state) {
  const DataMatrix x(gaussian(state.range(0), 5, 1));
  for (auto _ : state) benchmark::DoNotOptimize(pairwise_distances(x));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PairwiseDistances)->RangeMultiplier(2)->Range(64, 1024)->Complexity();

void BM_DcovComponents(benchmark::State& state) {
  const auto dx = pairwise_distances(DataMatrix(gaussian(state.range(0), 5, 1)));
  const auto dy = pairwise_distances(DataMatrix(gaussian(state.range(0), 10, 2)));
  for (auto _ : state) benchmark::DoNotOptimize(dcov_components(dx, dy));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DcovComponents)->RangeMultiplier(2)->Range(64, 1024)->Complexity();

void BM_PermutationPValue(benchmark::State& state) {
  const Index n = state.range(0);
  PermutationEngine engine(pairwise_distances(DataMatrix(gaussian(n, 5, 1))),
                           pairwise_distances(DataMatrix(gaussian(n, 10, 2))));
  const std::size_t r = default_permutations(n);
  for (auto _ : state) benchmark::DoNotOptimize(engine.p_value(r, 7));
}
BENCHMARK(BM_PermutationPValue)->Arg(60)->Arg(200)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_LassoCv(benchmark::State& state) {
  const Index n = 200;
  const Index k = state.range(0);
  const Eigen::MatrixXd f = gaussian(n, k, 3);
  const Eigen::VectorXd y = 2.0 * f.col(0) - 1.5 * f.col(1) + f.col(2) +
                            gaussian(n, 1, 4).col(0);
  const DataMatrix fm(f);
  for (auto _ : state) benchmark::DoNotOptimize(cv_select_lambda(fm, y, 10, 5));
}
BENCHMARK(BM_LassoCv)->Arg(30)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
