#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace depthkit {

/// Row-major grid of doubles with a per-pixel validity mask. The mask is
/// authoritative; invalid entries always hold 0.0 so serialized grids match the
/// sparse-depth file convention. Values are unconstrained (losses store signed
/// residuals in these).
struct MaskedGrid {
  int width = 0;
  int height = 0;
  std::vector<double> values;
  std::vector<std::uint8_t> valid;

  MaskedGrid() = default;
  MaskedGrid(int w, int h)
      : width(w), height(h), values(static_cast<std::size_t>(w) * h, 0.0),
        valid(static_cast<std::size_t>(w) * h, 0) {}

  std::size_t size() const { return values.size(); }
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }

  double at(int x, int y) const { return values[index(x, y)]; }
  bool valid_at(int x, int y) const { return valid[index(x, y)] != 0; }

  void set(int x, int y, double v) {
    values[index(x, y)] = v;
    valid[index(x, y)] = 1;
  }
  void set_invalid(int x, int y) {
    values[index(x, y)] = 0.0;
    valid[index(x, y)] = 0;
  }

  std::size_t valid_count() const {
    std::size_t n = 0;
    for (auto v : valid) n += v != 0;
    return n;
  }
};

/// Metric depth map: a MaskedGrid whose valid pixels are finite and strictly
/// positive. The universal currency of the toolkit.
class DepthMap {
 public:
  DepthMap() = default;

  /// All pixels invalid.
  DepthMap(int width, int height) : grid_(width, height) {}

  /// Takes ownership of a grid, zeroes invalid entries, and checks that every
  /// valid value is finite and > 0 (throws ErrorCode::invalid_argument otherwise).
  static DepthMap from_grid(MaskedGrid grid);

  /// All-valid map from row-major values.
  static DepthMap dense(int width, int height, std::vector<double> values);

  /// All-valid map holding a single constant.
  static DepthMap constant(int width, int height, double value);

  int width() const { return grid_.width; }
  int height() const { return grid_.height; }
  std::size_t size() const { return grid_.size(); }
  std::size_t index(int x, int y) const { return grid_.index(x, y); }

  double at(int x, int y) const { return grid_.at(x, y); }
  bool valid_at(int x, int y) const { return grid_.valid_at(x, y); }

  /// Checked write: v must be finite and > 0.
  void set(int x, int y, double v);
  void set_invalid(int x, int y) { grid_.set_invalid(x, y); }

  std::span<const double> values() const { return grid_.values; }
  std::span<const std::uint8_t> valid() const { return grid_.valid; }
  const MaskedGrid& grid() const { return grid_; }

  std::size_t valid_count() const { return grid_.valid_count(); }
  double valid_fraction() const {
    return grid_.size() == 0 ? 0.0 : static_cast<double>(valid_count()) / grid_.size();
  }

 private:
  MaskedGrid grid_;
};

}  // namespace depthkit
