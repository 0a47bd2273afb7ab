#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "depthkit/depth_map.hpp"

namespace depthkit {

/// kitti_mm: rmse/mae in millimeters, irmse/imae in 1/km.
/// nyu_m:    rmse/mae in meters, irmse/imae in 1/m.
enum class MetricUnits { kitti_mm, nyu_m };

struct MetricsReport {
  double rmse = 0.0;
  double mae = 0.0;
  double irmse = 0.0;
  double imae = 0.0;
  double rel = 0.0;
  std::vector<std::pair<double, double>> delta;  // (threshold, fraction)
  std::size_t n_valid = 0;
};

inline const std::vector<double>& default_delta_thresholds() {
  static const std::vector<double> t = {1.25, 1.25 * 1.25, 1.25 * 1.25 * 1.25};
  return t;
}

/// Depth-completion metrics over the jointly valid mask: rmse, mae, their
/// inverse-depth counterparts, mean absolute relative error (gt denominator),
/// and delta(theta) = fraction with max(p/g, g/p) < theta.
MetricsReport evaluate(const DepthMap& pred, const DepthMap& gt,
                       std::span<const double> thresholds = default_delta_thresholds(),
                       MetricUnits units = MetricUnits::kitti_mm);

}  // namespace depthkit
