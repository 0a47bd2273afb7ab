#include "depthkit/depth_map.hpp"

#include <cmath>
#include <string>

#include "depthkit/errors.hpp"

namespace depthkit {

DepthMap DepthMap::from_grid(MaskedGrid grid) {
  if (grid.width < 0 || grid.height < 0 ||
      grid.values.size() != static_cast<std::size_t>(grid.width) * grid.height ||
      grid.valid.size() != grid.values.size()) {
    raise(ErrorCode::invalid_argument, "DepthMap: grid dimensions do not match storage");
  }
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    if (grid.valid[i]) {
      if (!std::isfinite(grid.values[i]) || grid.values[i] <= 0.0) {
        raise(ErrorCode::invalid_argument,
              "DepthMap: valid pixel " + std::to_string(i) + " holds non-positive depth " +
                  std::to_string(grid.values[i]));
      }
    } else {
      grid.values[i] = 0.0;
    }
  }
  DepthMap map;
  map.grid_ = std::move(grid);
  return map;
}

DepthMap DepthMap::dense(int width, int height, std::vector<double> values) {
  MaskedGrid grid;
  grid.width = width;
  grid.height = height;
  grid.values = std::move(values);
  grid.valid.assign(grid.values.size(), 1);
  return from_grid(std::move(grid));
}

DepthMap DepthMap::constant(int width, int height, double value) {
  return dense(width, height, std::vector<double>(static_cast<std::size_t>(width) * height, value));
}

void DepthMap::set(int x, int y, double v) {
  if (!std::isfinite(v) || v <= 0.0) {
    raise(ErrorCode::invalid_argument, "DepthMap::set: depth must be finite and > 0, got " +
                                           std::to_string(v));
  }
  grid_.set(x, y, v);
}

}  // namespace depthkit
