#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "depthkit/bvh.hpp"
#include "depthkit/camera.hpp"
#include "depthkit/mesh.hpp"
#include "depthkit/rng.hpp"
#include "depthkit/simulate.hpp"

using namespace depthkit;

namespace {

DepthMap bench_scene(int w, int h) {
  std::vector<double> values(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      values[static_cast<std::size_t>(y) * w + x] =
          6.0 + std::sin(x * 0.07) + std::cos(y * 0.05);
    }
  }
  return DepthMap::dense(w, h, std::move(values));
}

}  // namespace

static void BM_BuildBvh(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DepthMap depth = bench_scene(n, n);
  const Intrinsics K{0.8 * n, 0.8 * n, n / 2.0, n / 2.0};
  const TriangleMesh mesh = grid_mesh(depth, K);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_bvh(mesh));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(mesh.triangles.size()));
}
BENCHMARK(BM_BuildBvh)->Arg(64)->Arg(128)->Arg(256);

static void BM_Cast(benchmark::State& state) {
  const int n = 160;
  const DepthMap depth = bench_scene(n, n);
  const Intrinsics K{0.8 * n, 0.8 * n, n / 2.0, n / 2.0};
  const TriangleMesh mesh = grid_mesh(depth, K);
  const Bvh bvh = build_bvh(mesh, static_cast<int>(state.range(0)));

  Rng rng(1);
  std::vector<Vec3> dirs;
  for (int i = 0; i < 4096; ++i) {
    const double u = rng.uniform(0.0, n - 1.0);
    const double v = rng.uniform(0.0, n - 1.0);
    dirs.push_back(normalized({(u - K.cx) / K.fx, (v - K.cy) / K.fy, 1.0}));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cast(bvh, mesh, dirs[i++ & 4095]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Cast)->Arg(1)->Arg(4)->Arg(16);

static void BM_Simulate(benchmark::State& state) {
  const int w = 608, h = 176;
  const DepthMap depth = bench_scene(w, h);
  const Intrinsics K{260.0, 260.0, w / 2.0, h / 2.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        simulate(w, h, depth, K, ScanConfig{}, MeshingConfig{}, 1, DepthKind::z_depth,
                 static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_Simulate)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond);
