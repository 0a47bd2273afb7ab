#include "depthkit/pyramid.hpp"

#include <algorithm>

#include "depthkit/errors.hpp"

namespace depthkit {
namespace {

struct Block {
  int x0, x1, y0, y1;
};

// Output pixel (x, y) pools rows [2y, 2y+2) and cols [2x, 2x+2); the last row
// and column absorb any trailing odd pixels.
Block block_for(int x, int y, int src_w, int src_h, int dst_w, int dst_h) {
  Block b;
  b.x0 = 2 * x;
  b.x1 = (x == dst_w - 1) ? src_w : std::min(src_w, 2 * x + 2);
  b.y0 = 2 * y;
  b.y1 = (y == dst_h - 1) ? src_h : std::min(src_h, 2 * y + 2);
  return b;
}

}  // namespace

MaskedGrid downsample(const MaskedGrid& grid) {
  if (grid.width < 1 || grid.height < 1) {
    raise(ErrorCode::invalid_argument, "downsample: grid must be at least 1x1");
  }
  const int dst_w = std::max(1, grid.width / 2);
  const int dst_h = std::max(1, grid.height / 2);
  MaskedGrid out(dst_w, dst_h);
  for (int y = 0; y < dst_h; ++y) {
    for (int x = 0; x < dst_w; ++x) {
      const Block b = block_for(x, y, grid.width, grid.height, dst_w, dst_h);
      double sum = 0.0;
      int n = 0;
      for (int sy = b.y0; sy < b.y1; ++sy) {
        for (int sx = b.x0; sx < b.x1; ++sx) {
          if (grid.valid_at(sx, sy)) {
            sum += grid.at(sx, sy);
            ++n;
          }
        }
      }
      if (n > 0) out.set(x, y, sum / n);
    }
  }
  return out;
}

DepthMap downsample(const DepthMap& map) { return DepthMap::from_grid(downsample(map.grid())); }

std::vector<double> downsample_backward(const MaskedGrid& src, const MaskedGrid& dst,
                                        const std::vector<double>& grad_dst) {
  if (grad_dst.size() != dst.size()) {
    raise(ErrorCode::invalid_argument, "downsample_backward: gradient size mismatch");
  }
  std::vector<double> grad_src(src.size(), 0.0);
  for (int y = 0; y < dst.height; ++y) {
    for (int x = 0; x < dst.width; ++x) {
      const double g = grad_dst[dst.index(x, y)];
      if (g == 0.0 || !dst.valid_at(x, y)) continue;
      const Block b = block_for(x, y, src.width, src.height, dst.width, dst.height);
      int n = 0;
      for (int sy = b.y0; sy < b.y1; ++sy)
        for (int sx = b.x0; sx < b.x1; ++sx) n += src.valid_at(sx, sy);
      if (n == 0) continue;
      const double w = g / n;
      for (int sy = b.y0; sy < b.y1; ++sy)
        for (int sx = b.x0; sx < b.x1; ++sx)
          if (src.valid_at(sx, sy)) grad_src[src.index(sx, sy)] += w;
    }
  }
  return grad_src;
}

DepthPyramid build_pyramid(const DepthMap& map, int levels) {
  if (levels < 1) raise(ErrorCode::invalid_argument, "build_pyramid: need at least one level");
  DepthPyramid pyr;
  pyr.levels.reserve(levels);
  pyr.levels.push_back(map);
  for (int k = 1; k < levels; ++k) pyr.levels.push_back(downsample(pyr.levels.back()));
  return pyr;
}

std::vector<MaskedGrid> build_grid_pyramid(const MaskedGrid& grid, int levels) {
  if (levels < 1) raise(ErrorCode::invalid_argument, "build_grid_pyramid: need at least one level");
  std::vector<MaskedGrid> pyr;
  pyr.reserve(levels);
  pyr.push_back(grid);
  for (int k = 1; k < levels; ++k) pyr.push_back(downsample(pyr.back()));
  return pyr;
}

}  // namespace depthkit
