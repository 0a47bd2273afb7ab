#pragma once

#include <cstdint>
#include <vector>

#include "depthkit/camera.hpp"
#include "depthkit/geometry.hpp"

namespace depthkit {

enum class ScanMode { beams, random_pixels };

struct ScanConfig {
  int n_beams = 64;
  double vertical_fov_lo = -24.9;  // degrees, elevation above the horizon
  double vertical_fov_hi = 2.0;
  double azimuth_step = 0.2;  // degrees
  ScanMode mode = ScanMode::beams;
  double dropout = 0.0;  // per-ray drop probability in [0, 1)
};

/// Unit ray directions in camera coordinates, all with positive Z.
struct ScanPattern {
  std::vector<Vec3> rays;
  std::vector<int> beam_id;  // beam index (beams mode) or source row (random_pixels)
};

/// beams: one ray per (elevation, azimuth) cell, elevations spanning the
/// vertical fov, azimuths stepping across the horizontal frustum of K; rays
/// projecting outside the image are discarded. random_pixels: one ray through
/// every pixel center, so dropout selects a uniform pixel subset. Either mode
/// ends empty -> ErrorCode::empty_pattern.
ScanPattern gen_scan_pattern(const ScanConfig& cfg, const Intrinsics& K, int width, int height,
                             std::uint64_t rng_seed);

void validate(const ScanConfig& cfg);

}  // namespace depthkit
