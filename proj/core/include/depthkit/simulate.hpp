#pragma once

#include <cstdint>
#include <span>

#include "depthkit/bvh.hpp"
#include "depthkit/camera.hpp"
#include "depthkit/depth_map.hpp"
#include "depthkit/mesh.hpp"
#include "depthkit/scan.hpp"

namespace depthkit {

/// What a rendered sample stores: the hit's Z coordinate (interchangeable with
/// ordinary depth maps) or the Euclidean distance along the ray.
enum class DepthKind { z_depth, range };

/// Project hits into the image and splat each to its nearest pixel; colliding
/// samples keep the minimum value, untouched pixels stay invalid.
DepthMap render_sparse(std::span<const RayHit> hits, const Intrinsics& K, int width, int height,
                       DepthKind kind = DepthKind::z_depth);

struct SimulationResult {
  DepthMap sparse;
  std::size_t n_rays = 0;
  std::size_t n_hits = 0;
  std::size_t n_triangles = 0;
};

/// Full scan simulation: mesh the source depth map, build a BVH, generate the
/// scan pattern, cast every ray, and render the hits. Pure function of its
/// arguments for any thread count.
SimulationResult simulate(int width, int height, const DepthMap& depth, const Intrinsics& K,
                          const ScanConfig& scan, const MeshingConfig& meshing,
                          std::uint64_t rng_seed, DepthKind kind = DepthKind::z_depth,
                          int n_threads = 1);

}  // namespace depthkit
