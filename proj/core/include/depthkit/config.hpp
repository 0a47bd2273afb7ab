#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>

#include "depthkit/camera.hpp"
#include "depthkit/depth_io.hpp"
#include "depthkit/losses.hpp"
#include "depthkit/mesh.hpp"
#include "depthkit/scan.hpp"
#include "depthkit/simulate.hpp"

namespace depthkit {

/// Everything the pipeline commands can be told from a config file. Every
/// field has a usable default, so an empty file is a valid config.
struct PipelineConfig {
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = hardware concurrency

  std::optional<Interval> fx_range;  // unset -> [0.6, 1.4] * image width
  std::optional<Interval> fy_range;
  double principal_jitter = 0.05;
  bool lock_aspect = true;

  ScanConfig scan;
  MeshingConfig meshing;
  LossConfig loss;
  DepthKind depth_kind = DepthKind::z_depth;

  DepthCodec mono_codec{DepthFileKind::float_map, MonoSpace::inverse_depth};
  DepthCodec pred_codec{DepthFileKind::float_map, MonoSpace::depth};
  DepthCodec gt_codec{DepthFileKind::png16_kitti, MonoSpace::depth};

  /// Resolve the sampling ranges against an image width (defaults are relative
  /// to the frame).
  IntrinsicsRange intrinsics_range_for(int width) const;
};

/// Parse `key = value` lines ('#' starts a comment). Unknown keys, malformed
/// values, and constraint violations raise ErrorCode::parse naming the key.
PipelineConfig parse_config_text(std::string_view text);
PipelineConfig parse_config(const std::filesystem::path& path);

}  // namespace depthkit
