#pragma once

#include <vector>

#include "depthkit/depth_map.hpp"

namespace depthkit {

/// Valid-aware 2x2 average pooling. Output dims are floor(input/2) with a
/// minimum of 1; trailing odd rows/columns merge into the last block. An output
/// pixel is the mean of the valid pixels in its block and is invalid iff the
/// whole block is invalid.
MaskedGrid downsample(const MaskedGrid& grid);
DepthMap downsample(const DepthMap& map);

/// Adjoint of downsample with respect to the values: scatters an output-sized
/// gradient back onto the valid source pixels (1/block_valid_count weights).
std::vector<double> downsample_backward(const MaskedGrid& src, const MaskedGrid& dst,
                                        const std::vector<double>& grad_dst);

struct DepthPyramid {
  std::vector<DepthMap> levels;  // level 0 = full resolution
};

/// K levels, level 0 is the input unmodified. K < 1 throws invalid_argument.
DepthPyramid build_pyramid(const DepthMap& map, int levels);

std::vector<MaskedGrid> build_grid_pyramid(const MaskedGrid& grid, int levels);

}  // namespace depthkit
