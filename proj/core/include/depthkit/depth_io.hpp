#pragma once

#include <filesystem>

#include "depthkit/depth_map.hpp"

namespace depthkit {

enum class DepthFileKind {
  png16_kitti,  // 16-bit grayscale PNG, depth = raw / 256.0, raw 0 = invalid
  float_map,    // DKFMAP01 header + row-major little-endian f64 grid
};

enum class MonoSpace { depth, inverse_depth };

struct DepthCodec {
  DepthFileKind kind = DepthFileKind::png16_kitti;
  /// inverse_depth stores 1/value on disk; read_depth maps positive stored
  /// values back through v -> 1/v and treats the rest as invalid.
  MonoSpace mono_space = MonoSpace::depth;
};

/// Decode a depth file. The file magic must match the declared codec
/// (magic_mismatch), short or corrupt files raise truncated_file, and a file
/// with no valid pixel raises all_invalid.
DepthMap read_depth(const std::filesystem::path& path, const DepthCodec& codec);

/// Inverse of read_depth. png16_kitti quantizes to 1/256 m and requires every
/// stored value to fit a positive 16-bit raw code (range error otherwise).
void write_depth(const DepthMap& map, const std::filesystem::path& path, const DepthCodec& codec);

/// float_map at grid level, no depth-positivity constraints; used for gradient
/// dumps and other signed rasters.
void write_float_map_grid(const MaskedGrid& grid, const std::filesystem::path& path);
MaskedGrid read_float_map_grid(const std::filesystem::path& path);

}  // namespace depthkit
