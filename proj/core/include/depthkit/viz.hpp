#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "depthkit/depth_map.hpp"

namespace depthkit {

/// Turbo colormap (polynomial fit), t clamped to [0, 1].
std::array<std::uint8_t, 3> turbo_colormap(double t);

/// Color-map a depth map: valid depths normalized to the [min, max] of the
/// valid pixels (constant maps render at mid-scale), invalid pixels black.
/// Returns row-major RGB8.
std::vector<std::uint8_t> render_depth_rgb(const DepthMap& map);

void write_rgb_png(const std::filesystem::path& path, int width, int height,
                   const std::vector<std::uint8_t>& rgb);

/// 8-bit RGB PNG reader (test support for golden images).
std::vector<std::uint8_t> read_rgb_png(const std::filesystem::path& path, int& width, int& height);

}  // namespace depthkit
