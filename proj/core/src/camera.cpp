#include "depthkit/camera.hpp"

#include <cmath>
#include <string>

#include "depthkit/errors.hpp"
#include "depthkit/rng.hpp"

namespace depthkit {

IntrinsicsRange IntrinsicsRange::defaults_for(int width) {
  IntrinsicsRange r;
  r.fx_range = {0.6 * width, 1.4 * width};
  r.fy_range = r.fx_range;
  r.principal_point_jitter = 0.05;
  r.lock_aspect = true;
  return r;
}

void validate(const IntrinsicsRange& range) {
  auto check = [](const Interval& iv, const char* name) {
    if (!(iv.lo > 0.0) || !(iv.lo <= iv.hi) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
      raise(ErrorCode::invalid_argument,
            std::string(name) + ": interval must satisfy 0 < lo <= hi, got [" +
                std::to_string(iv.lo) + ", " + std::to_string(iv.hi) + "]");
    }
  };
  check(range.fx_range, "fx_range");
  check(range.fy_range, "fy_range");
  if (!(range.principal_point_jitter >= 0.0) || range.principal_point_jitter >= 0.5) {
    raise(ErrorCode::invalid_argument, "principal_jitter: must lie in [0, 0.5)");
  }
}

void validate(const Intrinsics& K) {
  if (!(K.fx > 0.0) || !(K.fy > 0.0) || !std::isfinite(K.cx) || !std::isfinite(K.cy)) {
    raise(ErrorCode::invalid_argument, "Intrinsics: fx, fy must be > 0 and cx, cy finite");
  }
}

Intrinsics sample_intrinsics(std::uint64_t rng_seed, const IntrinsicsRange& range, int width,
                             int height) {
  validate(range);
  if (width < 1 || height < 1) {
    raise(ErrorCode::invalid_argument, "sample_intrinsics: image dims must be positive");
  }
  Rng rng(rng_seed);
  Intrinsics K;
  K.fx = rng.uniform(range.fx_range.lo, range.fx_range.hi);
  K.fy = range.lock_aspect ? K.fx : rng.uniform(range.fy_range.lo, range.fy_range.hi);
  const double jx = range.principal_point_jitter * width;
  const double jy = range.principal_point_jitter * height;
  K.cx = width / 2.0 + rng.uniform(-jx, jx);
  K.cy = height / 2.0 + rng.uniform(-jy, jy);
  return K;
}

PointCloud unproject(const DepthMap& depth, const Intrinsics& K) {
  validate(K);
  PointCloud cloud;
  cloud.points.reserve(depth.valid_count());
  cloud.source_pixel.reserve(cloud.points.capacity());
  for (int v = 0; v < depth.height(); ++v) {
    for (int u = 0; u < depth.width(); ++u) {
      if (!depth.valid_at(u, v)) continue;
      const double z = depth.at(u, v);
      cloud.points.push_back({(u - K.cx) * z / K.fx, (v - K.cy) * z / K.fy, z});
      cloud.source_pixel.push_back({u, v});
    }
  }
  return cloud;
}

Projection project(const Vec3& point, const Intrinsics& K) {
  validate(K);
  if (!(point.z > 0.0)) {
    raise(ErrorCode::behind_camera,
          "project: point has non-positive depth " + std::to_string(point.z));
  }
  return {K.fx * point.x / point.z + K.cx, K.fy * point.y / point.z + K.cy, point.z};
}

}  // namespace depthkit
