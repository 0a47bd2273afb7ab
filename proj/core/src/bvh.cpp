#include "depthkit/bvh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "depthkit/errors.hpp"

namespace depthkit {

std::optional<TriangleHit> intersect_triangle(const Vec3& dir, const Vec3& p0, const Vec3& p1,
                                              const Vec3& p2, double t_min, double t_max) {
  // permute so the dominant direction component becomes z
  int kz = 0;
  double amax = std::abs(dir.x);
  if (std::abs(dir.y) > amax) {
    kz = 1;
    amax = std::abs(dir.y);
  }
  if (std::abs(dir.z) > amax) kz = 2;
  int kx = (kz + 1) % 3;
  int ky = (kz + 2) % 3;
  if (dir[kz] < 0.0) std::swap(kx, ky);

  const double dz = dir[kz];
  const double sx = dir[kx] / dz;
  const double sy = dir[ky] / dz;
  const double sz = 1.0 / dz;

  // shear vertices into ray space (origin already at 0)
  const double p0x = p0[kx] - sx * p0[kz];
  const double p0y = p0[ky] - sy * p0[kz];
  const double p1x = p1[kx] - sx * p1[kz];
  const double p1y = p1[ky] - sy * p1[kz];
  const double p2x = p2[kx] - sx * p2[kz];
  const double p2y = p2[ky] - sy * p2[kz];

  double e0 = p1x * p2y - p1y * p2x;
  double e1 = p2x * p0y - p2y * p0x;
  double e2 = p0x * p1y - p0y * p1x;

  // Rays through a shared vertex land on edge functions that are pure rounding
  // noise. Re-evaluate those in extended precision and snap anything still
  // below the triangle's own scale to an exact zero; the sign test then treats
  // the ray as on the edge instead of dropping it into a crack.
  const double mag = (std::abs(p0x) + std::abs(p1x) + std::abs(p2x)) *
                     (std::abs(p0y) + std::abs(p1y) + std::abs(p2y));
  const double snap = 1e-12 * mag;
  if (std::abs(e0) <= snap || std::abs(e1) <= snap || std::abs(e2) <= snap) {
    e0 = static_cast<double>(static_cast<long double>(p1x) * p2y -
                             static_cast<long double>(p1y) * p2x);
    e1 = static_cast<double>(static_cast<long double>(p2x) * p0y -
                             static_cast<long double>(p2y) * p0x);
    e2 = static_cast<double>(static_cast<long double>(p0x) * p1y -
                             static_cast<long double>(p0y) * p1x);
    if (std::abs(e0) <= snap) e0 = 0.0;
    if (std::abs(e1) <= snap) e1 = 0.0;
    if (std::abs(e2) <= snap) e2 = 0.0;
  }

  if ((e0 < 0.0 || e1 < 0.0 || e2 < 0.0) && (e0 > 0.0 || e1 > 0.0 || e2 > 0.0)) return std::nullopt;
  const double det = e0 + e1 + e2;
  if (det == 0.0) return std::nullopt;

  const double z0 = sz * p0[kz];
  const double z1 = sz * p1[kz];
  const double z2 = sz * p2[kz];
  const double t = (e0 * z0 + e1 * z1 + e2 * z2) / det;
  if (!(t > t_min) || !(t < t_max)) return std::nullopt;
  return TriangleHit{t, e0 / det, e1 / det, e2 / det};
}

namespace {

struct TriBox {
  Vec3 bmin, bmax, centroid;
};

// boxes get a hair of padding so exact-boundary hits survive the slab test
void grow(Vec3& bmin, Vec3& bmax) {
  for (int a = 0; a < 3; ++a) {
    const double pad = 1e-10 * (1.0 + std::max(std::abs(bmin[a]), std::abs(bmax[a])));
    bmin[a] -= pad;
    bmax[a] += pad;
  }
}

bool box_hit(const Vec3& bmin, const Vec3& bmax, const Vec3& dir, const Vec3& inv_dir,
             double t_max, double& t_near) {
  double lo = 0.0;
  double hi = t_max;
  for (int a = 0; a < 3; ++a) {
    if (dir[a] == 0.0) {
      if (bmin[a] > 0.0 || bmax[a] < 0.0) return false;  // origin outside the slab
      continue;
    }
    double t1 = bmin[a] * inv_dir[a];
    double t2 = bmax[a] * inv_dir[a];
    if (t1 > t2) std::swap(t1, t2);
    lo = std::max(lo, t1);
    hi = std::min(hi, t2);
    if (lo > hi) return false;
  }
  t_near = lo;
  return true;
}

}  // namespace

Bvh build_bvh(const TriangleMesh& mesh, int leaf_size) {
  if (leaf_size < 1) raise(ErrorCode::invalid_argument, "build_bvh: leaf_size must be >= 1");
  Bvh bvh;
  bvh.leaf_size_ = leaf_size;
  const std::size_t n = mesh.triangles.size();
  if (n == 0) return bvh;

  std::vector<TriBox> boxes(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& t = mesh.triangles[i];
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    boxes[i].bmin = componentwise_min(a, componentwise_min(b, c));
    boxes[i].bmax = componentwise_max(a, componentwise_max(b, c));
    boxes[i].centroid = (a + b + c) / 3.0;
  }

  bvh.order_.resize(n);
  for (std::size_t i = 0; i < n; ++i) bvh.order_[i] = static_cast<std::uint32_t>(i);
  bvh.nodes_.reserve(2 * n);

  // recursive median split over order_[begin, end)
  auto build = [&](auto&& self, std::uint32_t begin, std::uint32_t end) -> std::uint32_t {
    const std::uint32_t node_index = static_cast<std::uint32_t>(bvh.nodes_.size());
    bvh.nodes_.emplace_back();

    Vec3 bmin = boxes[bvh.order_[begin]].bmin;
    Vec3 bmax = boxes[bvh.order_[begin]].bmax;
    Vec3 cmin = boxes[bvh.order_[begin]].centroid;
    Vec3 cmax = cmin;
    for (std::uint32_t i = begin + 1; i < end; ++i) {
      const TriBox& tb = boxes[bvh.order_[i]];
      bmin = componentwise_min(bmin, tb.bmin);
      bmax = componentwise_max(bmax, tb.bmax);
      cmin = componentwise_min(cmin, tb.centroid);
      cmax = componentwise_max(cmax, tb.centroid);
    }
    grow(bmin, bmax);

    const Vec3 extent = cmax - cmin;
    int axis = 0;
    if (extent.y > extent[axis]) axis = 1;
    if (extent.z > extent[axis]) axis = 2;

    const std::uint32_t count = end - begin;
    if (count <= static_cast<std::uint32_t>(leaf_size) || extent[axis] == 0.0) {
      Bvh::Node& node = bvh.nodes_[node_index];
      node.box_min = bmin;
      node.box_max = bmax;
      node.first = begin;
      node.count = count;
      return node_index;
    }

    const std::uint32_t mid = begin + count / 2;
    std::nth_element(bvh.order_.begin() + begin, bvh.order_.begin() + mid,
                     bvh.order_.begin() + end, [&](std::uint32_t a, std::uint32_t b) {
                       const double ca = boxes[a].centroid[axis];
                       const double cb = boxes[b].centroid[axis];
                       return ca < cb || (ca == cb && a < b);
                     });
    const std::uint32_t left = self(self, begin, mid);
    const std::uint32_t right = self(self, mid, end);
    Bvh::Node& node = bvh.nodes_[node_index];
    node.box_min = bmin;
    node.box_max = bmax;
    node.left = left;
    node.right = right;
    node.count = 0;
    return node_index;
  };
  build(build, 0, static_cast<std::uint32_t>(n));
  return bvh;
}

std::optional<RayHit> cast(const Bvh& bvh, const TriangleMesh& mesh, const Vec3& dir,
                           double t_epsilon) {
  if (std::abs(norm(dir) - 1.0) > 1e-9) {
    raise(ErrorCode::invalid_argument, "cast: direction must be a unit vector");
  }
  if (bvh.empty()) return std::nullopt;

  const Vec3 inv_dir = {1.0 / dir.x, 1.0 / dir.y, 1.0 / dir.z};
  constexpr std::uint32_t kStackSize = 64;
  std::uint32_t stack[kStackSize];
  std::uint32_t stack_top = 0;
  stack[stack_top++] = 0;

  bool found = false;
  RayHit best;
  best.t = std::numeric_limits<double>::infinity();
  best.triangle = std::numeric_limits<std::uint32_t>::max();

  auto prune_t = [&] { return found ? best.t + kRayTieEpsilon : std::numeric_limits<double>::infinity(); };

  while (stack_top > 0) {
    const Bvh::Node& node = bvh.nodes()[stack[--stack_top]];
    double t_near;
    if (!box_hit(node.box_min, node.box_max, dir, inv_dir, prune_t(), t_near)) continue;

    if (node.is_leaf()) {
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
        const std::uint32_t tri = bvh.triangle_order()[i];
        const auto& tv = mesh.triangles[tri];
        auto hit = intersect_triangle(dir, mesh.vertices[tv[0]], mesh.vertices[tv[1]],
                                      mesh.vertices[tv[2]], t_epsilon, prune_t());
        if (!hit) continue;
        const bool better = !found || hit->t < best.t - kRayTieEpsilon ||
                            (hit->t <= best.t + kRayTieEpsilon && tri < best.triangle);
        if (better) {
          found = true;
          best.t = hit->t;
          best.triangle = tri;
          best.b0 = hit->b0;
          best.b1 = hit->b1;
          best.b2 = hit->b2;
        }
      }
      continue;
    }

    // near child popped first
    const Bvh::Node& lnode = bvh.nodes()[node.left];
    const Bvh::Node& rnode = bvh.nodes()[node.right];
    double tl = std::numeric_limits<double>::infinity();
    double tr = std::numeric_limits<double>::infinity();
    const bool hl = box_hit(lnode.box_min, lnode.box_max, dir, inv_dir, prune_t(), tl);
    const bool hr = box_hit(rnode.box_min, rnode.box_max, dir, inv_dir, prune_t(), tr);
    if (hl && hr) {
      if (tl <= tr) {
        stack[stack_top++] = node.right;
        stack[stack_top++] = node.left;
      } else {
        stack[stack_top++] = node.left;
        stack[stack_top++] = node.right;
      }
    } else if (hl) {
      stack[stack_top++] = node.left;
    } else if (hr) {
      stack[stack_top++] = node.right;
    }
  }

  if (!found) return std::nullopt;
  best.point = best.t * dir;
  return best;
}

}  // namespace depthkit
