#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "depthkit/geometry.hpp"
#include "depthkit/mesh.hpp"

namespace depthkit {

constexpr double kRayTEpsilon = 1e-6;   // self-intersection guard, meters
constexpr double kRayTieEpsilon = 1e-12;  // hits closer than this count as tied

struct RayHit {
  double t = 0.0;            // distance along the unit ray
  std::uint32_t triangle = 0;
  Vec3 point;                // t * dir
  double b0 = 0.0, b1 = 0.0, b2 = 0.0;  // barycentric weights
};

struct TriangleHit {
  double t;
  double b0, b1, b2;
};

/// Watertight ray/triangle test, ray origin fixed at (0,0,0). Edge functions
/// are re-evaluated in extended precision when any of them underflows to zero,
/// so rays passing exactly through shared edges or vertices never fall through
/// the mesh. Accepts hits with t in (t_min, t_max).
std::optional<TriangleHit> intersect_triangle(const Vec3& dir, const Vec3& p0, const Vec3& p1,
                                              const Vec3& p2, double t_min, double t_max);

/// Binary AABB hierarchy, median split on the longest centroid axis.
class Bvh {
 public:
  struct Node {
    Vec3 box_min;
    Vec3 box_max;
    std::uint32_t left = 0;   // internal nodes only
    std::uint32_t right = 0;
    std::uint32_t first = 0;  // leaves: range into triangle_order()
    std::uint32_t count = 0;  // > 0 marks a leaf
    bool is_leaf() const { return count > 0; }
  };

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<std::uint32_t>& triangle_order() const { return order_; }
  bool empty() const { return nodes_.empty(); }
  int leaf_size() const { return leaf_size_; }

  friend Bvh build_bvh(const TriangleMesh& mesh, int leaf_size);

 private:
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> order_;
  int leaf_size_ = 4;
};

Bvh build_bvh(const TriangleMesh& mesh, int leaf_size = 4);

/// Nearest intersection along a unit direction from the origin, t > t_epsilon.
/// Hits with t equal within kRayTieEpsilon resolve to the lower triangle index.
/// Returns nullopt on a miss.
std::optional<RayHit> cast(const Bvh& bvh, const TriangleMesh& mesh, const Vec3& dir,
                           double t_epsilon = kRayTEpsilon);

}  // namespace depthkit
