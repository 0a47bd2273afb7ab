#include "depthkit/simulate.hpp"

#include <cmath>
#include <optional>
#include <vector>

#include "depthkit/errors.hpp"
#include "depthkit/parallel.hpp"

namespace depthkit {

DepthMap render_sparse(std::span<const RayHit> hits, const Intrinsics& K, int width, int height,
                       DepthKind kind) {
  validate(K);
  if (width < 1 || height < 1) {
    raise(ErrorCode::invalid_argument, "render_sparse: image dims must be positive");
  }
  MaskedGrid grid(width, height);
  for (const RayHit& hit : hits) {
    if (!(hit.point.z > 0.0)) continue;
    const Projection p = project(hit.point, K);
    const long u = std::lround(p.u);
    const long v = std::lround(p.v);
    if (u < 0 || u >= width || v < 0 || v >= height) continue;
    const double value = kind == DepthKind::z_depth ? hit.point.z : norm(hit.point);
    if (!(value > 0.0)) continue;
    const std::size_t i = grid.index(static_cast<int>(u), static_cast<int>(v));
    if (!grid.valid[i] || value < grid.values[i]) {
      grid.values[i] = value;
      grid.valid[i] = 1;
    }
  }
  return DepthMap::from_grid(std::move(grid));
}

SimulationResult simulate(int width, int height, const DepthMap& depth, const Intrinsics& K,
                          const ScanConfig& scan, const MeshingConfig& meshing,
                          std::uint64_t rng_seed, DepthKind kind, int n_threads) {
  const TriangleMesh mesh = grid_mesh(depth, K, meshing);
  const Bvh bvh = build_bvh(mesh);
  const ScanPattern pattern = gen_scan_pattern(scan, K, width, height, rng_seed);

  std::vector<std::optional<RayHit>> hits(pattern.rays.size());
  parallel_for(pattern.rays.size(), n_threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) hits[i] = cast(bvh, mesh, pattern.rays[i]);
  });

  std::vector<RayHit> found;
  found.reserve(hits.size());
  for (const auto& h : hits) {
    if (h) found.push_back(*h);
  }

  SimulationResult result;
  result.sparse = render_sparse(found, K, width, height, kind);
  result.n_rays = pattern.rays.size();
  result.n_hits = found.size();
  result.n_triangles = mesh.triangles.size();
  return result;
}

}  // namespace depthkit
