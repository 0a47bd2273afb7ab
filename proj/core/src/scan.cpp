#include "depthkit/scan.hpp"

#include <cmath>
#include <numbers>

#include "depthkit/errors.hpp"
#include "depthkit/rng.hpp"

namespace depthkit {

void validate(const ScanConfig& cfg) {
  if (cfg.n_beams < 1) raise(ErrorCode::invalid_argument, "n_beams: must be >= 1");
  if (!(cfg.azimuth_step > 0.0)) raise(ErrorCode::invalid_argument, "azimuth_step: must be > 0");
  if (!(cfg.dropout >= 0.0) || cfg.dropout >= 1.0) {
    raise(ErrorCode::invalid_argument, "dropout: must lie in [0, 1)");
  }
  if (!(cfg.vertical_fov_lo <= cfg.vertical_fov_hi)) {
    raise(ErrorCode::invalid_argument, "vertical_fov: lo must be <= hi");
  }
}

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

bool inside_image(const Vec3& dir, const Intrinsics& K, int width, int height) {
  if (!(dir.z > 0.0)) return false;
  const double u = K.fx * dir.x / dir.z + K.cx;
  const double v = K.fy * dir.y / dir.z + K.cy;
  const long ui = std::lround(u);
  const long vi = std::lround(v);
  return ui >= 0 && ui < width && vi >= 0 && vi < height;
}

}  // namespace

ScanPattern gen_scan_pattern(const ScanConfig& cfg, const Intrinsics& K, int width, int height,
                             std::uint64_t rng_seed) {
  validate(cfg);
  validate(K);
  if (width < 1 || height < 1) {
    raise(ErrorCode::invalid_argument, "gen_scan_pattern: image dims must be positive");
  }

  Rng rng(rng_seed);
  ScanPattern pattern;

  auto push = [&](const Vec3& ray, int beam) {
    if (cfg.dropout > 0.0 && rng.uniform01() < cfg.dropout) return;
    pattern.rays.push_back(ray);
    pattern.beam_id.push_back(beam);
  };

  if (cfg.mode == ScanMode::beams) {
    // azimuth sweep bounded by the horizontal extent of the pixel grid
    const double az_min = std::atan((0.0 - K.cx) / K.fx);
    const double az_max = std::atan((width - 1.0 - K.cx) / K.fx);
    const double az_step = cfg.azimuth_step * kDegToRad;
    const int n_az = std::max(1, static_cast<int>(std::floor((az_max - az_min) / az_step)) + 1);

    for (int b = 0; b < cfg.n_beams; ++b) {
      const double elevation_deg =
          cfg.n_beams == 1
              ? 0.5 * (cfg.vertical_fov_lo + cfg.vertical_fov_hi)
              : cfg.vertical_fov_lo +
                    b * (cfg.vertical_fov_hi - cfg.vertical_fov_lo) / (cfg.n_beams - 1);
      const double elevation = elevation_deg * kDegToRad;
      const double ce = std::cos(elevation);
      const double se = std::sin(elevation);
      for (int a = 0; a < n_az; ++a) {
        const double azimuth = az_min + a * az_step;
        // +Y is down in camera coordinates, so positive elevation maps to -Y
        const Vec3 dir = {ce * std::sin(azimuth), -se, ce * std::cos(azimuth)};
        if (!inside_image(dir, K, width, height)) continue;
        push(dir, b);
      }
    }
  } else {
    for (int v = 0; v < height; ++v) {
      for (int u = 0; u < width; ++u) {
        const Vec3 dir = normalized({(u - K.cx) / K.fx, (v - K.cy) / K.fy, 1.0});
        push(dir, v);
      }
    }
  }

  if (pattern.rays.empty()) {
    raise(ErrorCode::empty_pattern, "gen_scan_pattern: no ray intersects the image frustum");
  }
  return pattern;
}

}  // namespace depthkit
