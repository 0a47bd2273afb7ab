#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "depthkit/camera.hpp"
#include "depthkit/depth_map.hpp"
#include "depthkit/geometry.hpp"

namespace depthkit {

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<std::uint32_t, 3>> triangles;
  std::vector<std::array<int, 2>> vertex_pixel;  // source (u, v), parallel to vertices

  bool empty() const { return triangles.empty(); }
};

struct MeshingConfig {
  /// Relative depth jump above which a triangle edge marks an occlusion
  /// boundary and the triangle is culled.
  double discontinuity_ratio = 0.05;
  double area_epsilon = 1e-12;  // m^2
};

/// Triangulate the unprojected grid: every 2x2 block of mutually valid pixels
/// yields two triangles, split along the diagonal with the smaller depth
/// difference. Triangles spanning a depth discontinuity or with area below
/// area_epsilon are culled; unused vertices are compacted away. Winding is
/// counter-clockwise as seen from the origin.
TriangleMesh grid_mesh(const DepthMap& depth, const Intrinsics& K, const MeshingConfig& cfg = {});

/// Plain-text polygon export: one "v x y z" line per vertex, then one
/// "f i j k" line per triangle (1-based indices).
void export_mesh(const TriangleMesh& mesh, const std::filesystem::path& path);

/// Inverse of export_mesh (vertex_pixel is not serialized and comes back empty).
TriangleMesh import_mesh(const std::filesystem::path& path);

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace depthkit
