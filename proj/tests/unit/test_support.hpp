#pragma once

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "depthkit/bvh.hpp"
#include "depthkit/depth_map.hpp"
#include "depthkit/losses.hpp"
#include "depthkit/pyramid.hpp"
#include "depthkit/rng.hpp"

namespace dk_test {

using namespace depthkit;

inline DepthMap random_map(Rng& rng, int w, int h, double lo, double hi,
                           double valid_fraction = 1.0) {
  MaskedGrid grid(w, h);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (valid_fraction >= 1.0 || rng.uniform01() < valid_fraction) {
      grid.values[i] = rng.uniform(lo, hi);
      grid.valid[i] = 1;
    }
  }
  if (grid.valid_count() < 2) {
    grid.values[0] = rng.uniform(lo, hi);
    grid.valid[0] = 1;
    grid.values[grid.size() - 1] = rng.uniform(lo, hi);
    grid.valid[grid.size() - 1] = 1;
  }
  return DepthMap::from_grid(std::move(grid));
}

inline DepthMap smooth_map(Rng& rng, int w, int h, double base, double amplitude) {
  std::vector<double> values(static_cast<std::size_t>(w) * h);
  const double fu = rng.uniform(0.5, 2.0);
  const double fv = rng.uniform(0.5, 2.0);
  const double pu = rng.uniform(0.0, 6.28);
  const double pv = rng.uniform(0.0, 6.28);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      values[static_cast<std::size_t>(y) * w + x] =
          base + amplitude * (std::sin(fu * x * 0.1 + pu) + std::cos(fv * y * 0.1 + pv));
    }
  }
  return DepthMap::dense(w, h, std::move(values));
}

/// Reference nearest-hit: scan every triangle with the same tie rule as cast().
inline std::optional<RayHit> brute_cast(const TriangleMesh& mesh, const Vec3& dir) {
  bool found = false;
  RayHit best;
  best.t = std::numeric_limits<double>::infinity();
  for (std::uint32_t i = 0; i < mesh.triangles.size(); ++i) {
    const auto& t = mesh.triangles[i];
    const auto hit = intersect_triangle(dir, mesh.vertices[t[0]], mesh.vertices[t[1]],
                                        mesh.vertices[t[2]], kRayTEpsilon,
                                        std::numeric_limits<double>::infinity());
    if (!hit) continue;
    const bool better = !found || hit->t < best.t - kRayTieEpsilon ||
                        (hit->t <= best.t + kRayTieEpsilon && i < best.triangle);
    if (better) {
      found = true;
      best = RayHit{hit->t, i, hit->t * dir, hit->b0, hit->b1, hit->b2};
    }
  }
  if (!found) return std::nullopt;
  return best;
}

inline DepthMap with_pixel(const DepthMap& map, std::size_t index, double delta) {
  MaskedGrid grid = map.grid();
  grid.values[index] += delta;
  return DepthMap::from_grid(std::move(grid));
}

/// Central finite differences against an analytic gradient; returns the worst
/// relative error over the prediction's valid pixels. Differences below 1e-9
/// are indistinguishable from FD rounding noise (ulp(loss)/2h ~ 1e-11) and do
/// not count.
template <typename Fn>
double fd_worst_rel_err(const DepthMap& pred, const Fn& fn, double h = 1e-4) {
  const auto [value, grad] = fn(pred);
  (void)value;
  double worst = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!pred.valid()[i]) continue;
    const double up = fn(with_pixel(pred, i, h)).first;
    const double down = fn(with_pixel(pred, i, -h)).first;
    const double fd = (up - down) / (2.0 * h);
    const double diff = std::abs(fd - grad[i]);
    if (diff < 1e-9) continue;
    const double denom = std::max({std::abs(fd), std::abs(grad[i]), 1e-8});
    worst = std::max(worst, diff / denom);
  }
  return worst;
}

/// Smallest |argument| across the absolute-value terms of every loss; FD-based
/// checks resample instances until this clears the step size.
inline double min_kink_distance(const DepthMap& pred, const DepthMap& gt, const DepthMap& mono,
                                const LossConfig& cfg = {}) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred.valid()[i] && gt.valid()[i]) {
      m = std::min(m, std::abs(pred.values()[i] - gt.values()[i]));
    }
  }
  const AlignmentParams align = ssi_align(pred, mono, cfg.solver);
  for (const bool aligned : {true, false}) {
    MaskedGrid residual(pred.width(), pred.height());
    for (std::size_t i = 0; i < pred.size(); ++i) {
      if (pred.valid()[i] && mono.valid()[i]) {
        const double target = aligned ? align.s * mono.values()[i] + align.b : mono.values()[i];
        residual.values[i] = pred.values()[i] - target;
        residual.valid[i] = 1;
        m = std::min(m, std::abs(residual.values[i]));
      }
    }
    for (const MaskedGrid& level : build_grid_pyramid(residual, cfg.pyramid_levels)) {
      for (int y = 0; y < level.height; ++y) {
        for (int x = 0; x < level.width; ++x) {
          if (!level.valid_at(x, y)) continue;
          if (x + 1 < level.width && level.valid_at(x + 1, y)) {
            m = std::min(m, std::abs(level.at(x + 1, y) - level.at(x, y)));
          }
          if (y + 1 < level.height && level.valid_at(x, y + 1)) {
            m = std::min(m, std::abs(level.at(x, y + 1) - level.at(x, y)));
          }
        }
      }
    }
  }
  return m;
}

struct LossTriple {
  DepthMap pred, gt, mono;
};

/// Random (pred, sparse gt, mono) with every |.| argument at least min_kink
/// away from zero, so finite differences of the piecewise-linear losses are
/// exact to rounding.
inline LossTriple kink_free_triple(Rng& rng, int w, int h, double min_kink = 2e-3,
                                   const LossConfig& cfg = {}) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    LossTriple t{random_map(rng, w, h, 1.0, 10.0), random_map(rng, w, h, 1.0, 10.0, 0.4),
                 random_map(rng, w, h, 1.0, 10.0)};
    if (min_kink_distance(t.pred, t.gt, t.mono, cfg) > min_kink) return t;
  }
  throw std::runtime_error("kink_free_triple: no clean instance found");
}

/// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  TempDir() {
    const auto base = std::filesystem::temp_directory_path();
    static std::uint64_t counter = 0;
    path_ = base / ("depthkit-test-" + std::to_string(::getpid()) + "-" +
                    std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace dk_test
