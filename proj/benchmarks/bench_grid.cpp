#include <benchmark/benchmark.h>

#include <vector>

#include "depthkit/pyramid.hpp"
#include "depthkit/reduce.hpp"
#include "depthkit/rng.hpp"

using namespace depthkit;

static void BM_MaskedReduce(benchmark::State& state) {
  Rng rng(5);
  const std::size_t n = 1u << 20;
  std::vector<double> values(n);
  std::vector<std::uint8_t> valid(n);
  for (std::size_t i = 0; i < n; ++i) {
    values[i] = rng.uniform(-1.0, 1.0);
    valid[i] = rng.uniform01() < 0.8;
  }
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(masked_reduce(values, valid, {ReduceMode::sum}, threads));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_MaskedReduce)->Arg(1)->Arg(2)->Arg(8);

static void BM_BuildPyramid(benchmark::State& state) {
  Rng rng(6);
  const int w = 1216, h = 352;
  MaskedGrid grid(w, h);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (rng.uniform01() < 0.9) {
      grid.values[i] = rng.uniform(1.0, 80.0);
      grid.valid[i] = 1;
    }
  }
  const DepthMap map = DepthMap::from_grid(std::move(grid));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_pyramid(map, 4));
  }
}
BENCHMARK(BM_BuildPyramid)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
