#include "depthkit/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "depthkit/errors.hpp"
#include "depthkit/reduce.hpp"

namespace depthkit {

MetricsReport evaluate(const DepthMap& pred, const DepthMap& gt,
                       std::span<const double> thresholds, MetricUnits units) {
  if (pred.width() != gt.width() || pred.height() != gt.height()) {
    raise(ErrorCode::invalid_argument, "evaluate: maps must share dimensions");
  }

  std::vector<std::uint8_t> mask(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    mask[i] = pred.valid()[i] && gt.valid()[i];
  }

  std::vector<double> sq(pred.size(), 0.0);
  std::vector<double> ab(pred.size(), 0.0);
  std::vector<double> isq(pred.size(), 0.0);
  std::vector<double> iab(pred.size(), 0.0);
  std::vector<double> rel(pred.size(), 0.0);
  std::vector<double> ratio(pred.size(), 0.0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!mask[i]) continue;
    const double p = pred.values()[i];
    const double g = gt.values()[i];
    if (!(p > 0.0) || !(g > 0.0)) {
      raise(ErrorCode::invalid_depth, "evaluate: jointly valid pixel with non-positive depth");
    }
    const double d = p - g;
    sq[i] = d * d;
    ab[i] = std::abs(d);
    const double id = 1.0 / p - 1.0 / g;
    isq[i] = id * id;
    iab[i] = std::abs(id);
    rel[i] = std::abs(d) / g;
    ratio[i] = std::max(p / g, g / p);
  }

  const MaskedSum count = masked_sum(ab, mask);
  if (count.count == 0) raise(ErrorCode::empty_mask, "evaluate: no jointly valid pixel");
  const double n = static_cast<double>(count.count);

  // meters and 1/m first, then unit conversion
  const double depth_scale = units == MetricUnits::kitti_mm ? 1000.0 : 1.0;   // m -> mm
  const double inv_scale = units == MetricUnits::kitti_mm ? 1000.0 : 1.0;     // 1/m -> 1/km

  MetricsReport report;
  report.n_valid = count.count;
  report.rmse = std::sqrt(masked_sum(sq, mask).sum / n) * depth_scale;
  report.mae = count.sum / n * depth_scale;
  report.irmse = std::sqrt(masked_sum(isq, mask).sum / n) * inv_scale;
  report.imae = masked_sum(iab, mask).sum / n * inv_scale;
  report.rel = masked_sum(rel, mask).sum / n;

  for (double theta : thresholds) {
    std::vector<double> below(pred.size(), 0.0);
    for (std::size_t i = 0; i < pred.size(); ++i) {
      if (mask[i] && ratio[i] < theta) below[i] = 1.0;
    }
    report.delta.emplace_back(theta, masked_sum(below, mask).sum / n);
  }
  return report;
}

}  // namespace depthkit
