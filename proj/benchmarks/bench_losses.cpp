#include <benchmark/benchmark.h>

#include "depthkit/losses.hpp"
#include "depthkit/rng.hpp"

using namespace depthkit;

namespace {

DepthMap random_bench_map(Rng& rng, int w, int h, double frac = 1.0) {
  MaskedGrid grid(w, h);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (frac >= 1.0 || rng.uniform01() < frac) {
      grid.values[i] = rng.uniform(1.0, 10.0);
      grid.valid[i] = 1;
    }
  }
  grid.values[0] = 5.0;
  grid.valid[0] = 1;
  grid.values[grid.size() - 1] = 5.0;
  grid.valid[grid.size() - 1] = 1;
  return DepthMap::from_grid(std::move(grid));
}

}  // namespace

static void BM_SsiLoss(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(2);
  const DepthMap pred = random_bench_map(rng, n, n);
  const DepthMap mono = random_bench_map(rng, n, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ssi_loss(pred, mono));
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_SsiLoss)->Arg(64)->Arg(256);

static void BM_GradientMatching(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(3);
  const DepthMap pred = random_bench_map(rng, n, n);
  const DepthMap mono = random_bench_map(rng, n, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gradient_matching(pred, mono, 4));
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_GradientMatching)->Arg(64)->Arg(256);

static void BM_CombinedLoss(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(4);
  const DepthMap pred = random_bench_map(rng, n, n);
  const DepthMap gt = random_bench_map(rng, n, n, 0.05);
  const DepthMap mono = random_bench_map(rng, n, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(combined_loss(pred, gt, mono));
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_CombinedLoss)->Arg(64)->Arg(256)->Arg(512);
