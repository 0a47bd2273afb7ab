#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "depthkit/depth_map.hpp"
#include "depthkit/geometry.hpp"

namespace depthkit {

/// Pinhole intrinsics. Pixel centers sit at integer coordinates; the camera is
/// at the origin with identity rotation, looking down +Z.
struct Intrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct IntrinsicsRange {
  Interval fx_range;
  Interval fy_range;
  double principal_point_jitter = 0.05;  // fraction of each image dimension
  bool lock_aspect = true;               // fy := fx when set

  /// Focal lengths spanning [0.6, 1.4] of the image width, 5% principal-point
  /// jitter, square pixels.
  static IntrinsicsRange defaults_for(int width);
};

struct PointCloud {
  std::vector<Vec3> points;
  std::vector<std::array<int, 2>> source_pixel;  // (u, v), parallel to points
};

struct Projection {
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;
};

/// Draw fx, fy uniformly from their intervals (fy copies fx under lock_aspect)
/// and jitter the principal point around the image center. Pure function of
/// (seed, range, dims).
Intrinsics sample_intrinsics(std::uint64_t rng_seed, const IntrinsicsRange& range, int width,
                             int height);

/// Back-project every valid pixel: X = (u - cx) Z / fx, Y = (v - cy) Z / fy.
PointCloud unproject(const DepthMap& depth, const Intrinsics& K);

/// u = fx X / Z + cx, v = fy Y / Z + cy. Z <= 0 throws behind_camera.
Projection project(const Vec3& point, const Intrinsics& K);

void validate(const IntrinsicsRange& range);
void validate(const Intrinsics& K);

}  // namespace depthkit
