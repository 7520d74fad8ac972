#include <benchmark/benchmark.h>

#include "minl/dilation.hpp"
#include "minl/nonlocality.hpp"

namespace {

using namespace minl;

void BM_Eigh(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ComplexMatrix h = random_density(n, n, 1).matrix();
  for (auto _ : state) benchmark::DoNotOptimize(eigh(h));
}
BENCHMARK(BM_Eigh)->Arg(4)->Arg(9)->Arg(16);

void BM_PartialTrace(benchmark::State& state) {
  const DensityMatrix rho = random_density(Dims{3, 3, 2}, 18, 2);
  for (auto _ : state) benchmark::DoNotOptimize(rho.reduced({1}));
}
BENCHMARK(BM_PartialTrace);

void BM_NReBellDiagonal(benchmark::State& state) {
  const DensityMatrix rho = bell_diagonal({0.6, -0.3, 0.2});
  OptimizerConfig cfg;
  cfg.restarts = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(n_re(rho, cfg).value);
}
BENCHMARK(BM_NReBellDiagonal)->Arg(1)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_NReQutritBlock(benchmark::State& state) {
  const DensityMatrix rho = with_uniform_marginal(random_density(Dims{2, 3}, 3, 4));
  OptimizerConfig cfg;
  cfg.restarts = 4;
  for (auto _ : state) benchmark::DoNotOptimize(n_re(rho, cfg).value);
}
BENCHMARK(BM_NReQutritBlock)->Unit(benchmark::kMillisecond);

void BM_NGeoBellDiagonal(benchmark::State& state) {
  const DensityMatrix rho = bell_diagonal({0.6, -0.3, 0.2});
  for (auto _ : state) benchmark::DoNotOptimize(n_geo(rho).value);
}
BENCHMARK(BM_NGeoBellDiagonal)->Unit(benchmark::kMillisecond);

void BM_GridOracle(benchmark::State& state) {
  const DensityMatrix rho = bell_diagonal({0.6, -0.3, 0.2});
  const auto res = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qubit_grid_oracle(rho, GridObjective::AvgConditionalEntropy, res));
  }
}
BENCHMARK(BM_GridOracle)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_Dilate(benchmark::State& state) {
  const DensityMatrix rho = random_density(Dims{3, 3}, 9, 5);
  const SpectralBlocks blocks = spectral_blocks(rho.reduced({1}));
  const InvariantMeasurement m = realize(blocks, BlockParameters::identity(blocks));
  for (auto _ : state) benchmark::DoNotOptimize(dilate(rho, m));
}
BENCHMARK(BM_Dilate);

}  // namespace

BENCHMARK_MAIN();
