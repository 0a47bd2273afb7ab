#include "depthkit/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "depthkit/bvh.hpp"
#include "depthkit/camera.hpp"
#include "depthkit/config.hpp"
#include "depthkit/depth_io.hpp"
#include "depthkit/losses.hpp"
#include "depthkit/mesh.hpp"
#include "depthkit/metrics.hpp"
#include "depthkit/parallel.hpp"
#include "depthkit/pyramid.hpp"
#include "depthkit/rng.hpp"
#include "depthkit/scan.hpp"
#include "depthkit/simulate.hpp"
#include "depthkit/viz.hpp"

namespace fs = std::filesystem;

namespace depthkit {

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::io:
    case ErrorCode::magic_mismatch:
    case ErrorCode::truncated_file:
      return kExitIo;
    case ErrorCode::empty_mask:
    case ErrorCode::all_invalid:
    case ErrorCode::invalid_depth:
    case ErrorCode::range:
    case ErrorCode::empty_pattern:
    case ErrorCode::behind_camera:
      return kExitData;
    case ErrorCode::insufficient_data:
      return kExitInsufficientData;
    case ErrorCode::invalid_argument:
    case ErrorCode::parse:
      return kExitUsage;
  }
  return kExitUsage;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

/// Outputs are written to "<final>.tmp" and renamed on commit, so a failure
/// mid-command never leaves partial files behind.
class StagedOutputs {
 public:
  fs::path stage(const fs::path& final_path) {
    staged_.push_back(final_path);
    return temp_of(final_path);
  }

  void commit() {
    for (const fs::path& p : staged_) fs::rename(temp_of(p), p);
    staged_.clear();
  }

  ~StagedOutputs() {
    for (const fs::path& p : staged_) {
      std::error_code ec;
      fs::remove(temp_of(p), ec);
    }
  }

 private:
  static fs::path temp_of(const fs::path& p) {
    fs::path t = p;
    t += ".tmp";
    return t;
  }
  std::vector<fs::path> staged_;
};

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error (" << error_code_name(e.code()) << "): " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error (io): " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

PipelineConfig load_config(const std::optional<fs::path>& path) {
  return path ? parse_config(*path) : PipelineConfig{};
}

std::vector<fs::path> list_files(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::io, "cannot open " + path.string());
  out << text;
  if (!out.flush()) raise(ErrorCode::io, "write failed for " + path.string());
}

void gen_one(const fs::path& mono_path, const PipelineConfig& cfg, std::uint64_t seed, int threads,
             const fs::path& out_dir, bool want_mesh, std::ostream& out) {
  const DepthMap mono = read_depth(mono_path, cfg.mono_codec);
  const int w = mono.width();
  const int h = mono.height();
  const Intrinsics K = sample_intrinsics(seed, cfg.intrinsics_range_for(w), w, h);
  const SimulationResult sim =
      simulate(w, h, mono, K, cfg.scan, cfg.meshing, seed, cfg.depth_kind, threads);
  const double coverage = sim.sparse.valid_fraction();

  std::ostringstream manifest;
  manifest << "input = " << mono_path.filename().string() << "\n"
           << "width = " << w << "\n"
           << "height = " << h << "\n"
           << "seed = " << seed << "\n"
           << "fx = " << fmt(K.fx) << "\n"
           << "fy = " << fmt(K.fy) << "\n"
           << "cx = " << fmt(K.cx) << "\n"
           << "cy = " << fmt(K.cy) << "\n"
           << "scan_mode = " << (cfg.scan.mode == ScanMode::beams ? "beams" : "random_pixels")
           << "\n"
           << "n_beams = " << cfg.scan.n_beams << "\n"
           << "vertical_fov = [" << fmt_short(cfg.scan.vertical_fov_lo) << ", "
           << fmt_short(cfg.scan.vertical_fov_hi) << "]\n"
           << "azimuth_step = " << fmt_short(cfg.scan.azimuth_step) << "\n"
           << "dropout = " << fmt_short(cfg.scan.dropout) << "\n"
           << "depth_kind = " << (cfg.depth_kind == DepthKind::z_depth ? "z_depth" : "range")
           << "\n"
           << "discontinuity_ratio = " << fmt_short(cfg.meshing.discontinuity_ratio) << "\n"
           << "n_triangles = " << sim.n_triangles << "\n"
           << "n_rays = " << sim.n_rays << "\n"
           << "n_hits = " << sim.n_hits << "\n"
           << "coverage = " << fmt(coverage) << "\n";

  const std::string stem = mono_path.stem().string();
  StagedOutputs staged;
  write_depth(sim.sparse, staged.stage(out_dir / (stem + "_simu.png")),
              DepthCodec{DepthFileKind::png16_kitti, MonoSpace::depth});
  write_depth(mono, staged.stage(out_dir / (stem + "_target.f64")),
              DepthCodec{DepthFileKind::float_map, MonoSpace::depth});
  if (want_mesh) {
    export_mesh(grid_mesh(mono, K, cfg.meshing), staged.stage(out_dir / (stem + "_mesh.obj")));
  }
  write_text(staged.stage(out_dir / (stem + "_manifest.txt")), manifest.str());
  staged.commit();

  out << stem << ": rays " << sim.n_rays << ", hits " << sim.n_hits << ", coverage "
      << fmt_short(coverage) << "\n";
}

}  // namespace

int run_gen(const GenArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const PipelineConfig cfg = load_config(args.config_path);
    const std::uint64_t base_seed = args.seed.value_or(cfg.seed);
    const int threads = resolve_threads(args.threads.value_or(cfg.threads));

    if (args.image_path && !fs::is_regular_file(*args.image_path)) {
      raise(ErrorCode::io, "gen: image file not found: " + args.image_path->string());
    }

    if (fs::is_directory(args.mono_path)) {
      const std::vector<fs::path> files = list_files(args.mono_path);
      if (files.empty()) {
        raise(ErrorCode::io, "gen: no input files in " + args.mono_path.string());
      }
      fs::create_directories(args.out_dir);
      for (std::size_t i = 0; i < files.size(); ++i) {
        gen_one(files[i], cfg, base_seed + i, threads, args.out_dir, args.export_mesh, out);
      }
    } else if (fs::is_regular_file(args.mono_path)) {
      fs::create_directories(args.out_dir);
      gen_one(args.mono_path, cfg, base_seed, threads, args.out_dir, args.export_mesh, out);
    } else {
      raise(ErrorCode::io, "gen: input not found: " + args.mono_path.string());
    }
    return kExitOk;
  });
}

int run_loss(const LossArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const PipelineConfig cfg = load_config(args.config_path);
    const DepthMap pred = read_depth(args.pred_path, cfg.pred_codec);
    const DepthMap gt = read_depth(args.gt_path, cfg.gt_codec);
    const DepthMap mono = read_depth(args.mono_path, cfg.mono_codec);
    const LossReport report = combined_loss(pred, gt, mono, cfg.loss);

    out << "sup = " << fmt(report.sup) << "\n"
        << "ssi = " << fmt(report.ssi) << "\n"
        << "reg = " << fmt(report.reg) << "\n"
        << "total = " << fmt(report.total) << "\n"
        << "align_s = " << fmt(report.alignment.s) << "\n"
        << "align_b = " << fmt(report.alignment.b) << "\n"
        << "align_degenerate = " << (report.alignment.degenerate ? "true" : "false") << "\n";

    if (args.dump_grad_path) {
      MaskedGrid grad(pred.width(), pred.height());
      grad.values = report.grad_total;
      grad.valid.assign(pred.valid().begin(), pred.valid().end());
      StagedOutputs staged;
      write_float_map_grid(grad, staged.stage(*args.dump_grad_path));
      staged.commit();
    }
    return kExitOk;
  });
}

namespace {

void print_metrics(std::ostream& out, const MetricsReport& r) {
  out << "rmse = " << fmt(r.rmse) << "\n"
      << "mae = " << fmt(r.mae) << "\n"
      << "irmse = " << fmt(r.irmse) << "\n"
      << "imae = " << fmt(r.imae) << "\n"
      << "rel = " << fmt(r.rel) << "\n";
  for (const auto& [theta, frac] : r.delta) {
    out << "delta_" << fmt_short(theta) << " = " << fmt(frac) << "\n";
  }
  out << "n_valid = " << r.n_valid << "\n";
}

}  // namespace

int run_eval(const EvalArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    DepthCodec pred_codec{DepthFileKind::png16_kitti, MonoSpace::depth};
    DepthCodec gt_codec = pred_codec;
    if (args.config_path) {
      const PipelineConfig cfg = parse_config(*args.config_path);
      pred_codec = cfg.pred_codec;
      gt_codec = cfg.gt_codec;
    }

    std::vector<std::pair<fs::path, fs::path>> pairs;
    if (fs::is_directory(args.pred_path) && fs::is_directory(args.gt_path)) {
      const auto pred_files = list_files(args.pred_path);
      const auto gt_files = list_files(args.gt_path);
      std::map<std::string, fs::path> gt_by_name;
      for (const auto& p : gt_files) gt_by_name[p.filename().string()] = p;
      if (pred_files.size() != gt_files.size()) {
        raise(ErrorCode::invalid_argument,
              "eval: prediction and ground-truth lists differ in size (" +
                  std::to_string(pred_files.size()) + " vs " + std::to_string(gt_files.size()) +
                  ")");
      }
      for (const auto& p : pred_files) {
        const auto it = gt_by_name.find(p.filename().string());
        if (it == gt_by_name.end()) {
          raise(ErrorCode::invalid_argument,
                "eval: no ground truth for " + p.filename().string());
        }
        pairs.emplace_back(p, it->second);
      }
    } else if (fs::is_regular_file(args.pred_path) && fs::is_regular_file(args.gt_path)) {
      pairs.emplace_back(args.pred_path, args.gt_path);
    } else {
      raise(ErrorCode::io, "eval: inputs must both be files or both be directories");
    }

    MetricsReport mean;
    for (const auto& [pred_path, gt_path] : pairs) {
      const DepthMap pred = read_depth(pred_path, pred_codec);
      const DepthMap gt = read_depth(gt_path, gt_codec);
      const MetricsReport r = evaluate(pred, gt, default_delta_thresholds(), args.units);
      out << "[image " << pred_path.filename().string() << "]\n";
      print_metrics(out, r);

      mean.rmse += r.rmse;
      mean.mae += r.mae;
      mean.irmse += r.irmse;
      mean.imae += r.imae;
      mean.rel += r.rel;
      mean.n_valid += r.n_valid;
      if (mean.delta.empty()) {
        mean.delta = r.delta;
      } else {
        for (std::size_t i = 0; i < mean.delta.size(); ++i) {
          mean.delta[i].second += r.delta[i].second;
        }
      }
    }

    const double n = static_cast<double>(pairs.size());
    mean.rmse /= n;
    mean.mae /= n;
    mean.irmse /= n;
    mean.imae /= n;
    mean.rel /= n;
    for (auto& d : mean.delta) d.second /= n;
    out << "[mean]\n"
        << "n_images = " << pairs.size() << "\n";
    print_metrics(out, mean);
    return kExitOk;
  });
}

int run_viz(const VizArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    DepthCodec codec{args.float_input ? DepthFileKind::float_map : DepthFileKind::png16_kitti,
                     MonoSpace::depth};
    if (args.config_path) codec = parse_config(*args.config_path).pred_codec;
    const DepthMap map = read_depth(args.depth_path, codec);
    const std::vector<std::uint8_t> rgb = render_depth_rgb(map);
    StagedOutputs staged;
    write_rgb_png(staged.stage(args.out_path), map.width(), map.height(), rgb);
    staged.commit();
    out << args.out_path.string() << ": " << map.width() << "x" << map.height() << "\n";
    return kExitOk;
  });
}

// ---------------------------------------------------------------------------
// selftest
// ---------------------------------------------------------------------------

namespace {

DepthMap random_depth_map(Rng& rng, int w, int h, double lo, double hi,
                          double valid_fraction = 1.0) {
  MaskedGrid grid(w, h);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (valid_fraction >= 1.0 || rng.uniform01() < valid_fraction) {
      grid.values[i] = rng.uniform(lo, hi);
      grid.valid[i] = 1;
    }
  }
  // keep degenerate masks out of the generators
  if (grid.valid_count() < 2) {
    grid.values[0] = rng.uniform(lo, hi);
    grid.valid[0] = 1;
    grid.values[grid.size() - 1] = rng.uniform(lo, hi);
    grid.valid[grid.size() - 1] = 1;
  }
  return DepthMap::from_grid(std::move(grid));
}

// smallest |argument| across every absolute-value term of the combined loss;
// instances are resampled until this clears the finite-difference step by a
// wide margin
double min_kink_distance(const DepthMap& pred, const DepthMap& gt, const DepthMap& mono,
                         const LossConfig& cfg) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred.valid()[i] && gt.valid()[i]) {
      m = std::min(m, std::abs(pred.values()[i] - gt.values()[i]));
    }
  }
  const AlignmentParams align = ssi_align(pred, mono, cfg.solver);
  // screen both the aligned residual (ssi + combined reg) and the raw residual
  // (standalone gradient matching)
  for (const bool aligned : {true, false}) {
    MaskedGrid residual(pred.width(), pred.height());
    for (std::size_t i = 0; i < pred.size(); ++i) {
      if (pred.valid()[i] && mono.valid()[i]) {
        const double target =
            aligned ? align.s * mono.values()[i] + align.b : mono.values()[i];
        const double r = pred.values()[i] - target;
        m = std::min(m, std::abs(r));
        residual.values[i] = r;
        residual.valid[i] = 1;
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

DepthMap perturbed(const DepthMap& map, std::size_t index, double delta) {
  MaskedGrid grid = map.grid();
  grid.values[index] += delta;
  return DepthMap::from_grid(std::move(grid));
}

template <typename LossFn>
double fd_max_rel_err(const DepthMap& pred, const LossFn& fn, double h) {
  const auto [value, grad] = fn(pred);
  (void)value;
  double worst = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!pred.valid()[i]) continue;
    const double up = fn(perturbed(pred, i, h)).first;
    const double down = fn(perturbed(pred, i, -h)).first;
    const double fd = (up - down) / (2.0 * h);
    const double diff = std::abs(fd - grad[i]);
    if (diff < 1e-9) continue;  // below finite-difference rounding noise
    const double denom = std::max({std::abs(fd), std::abs(grad[i]), 1e-8});
    worst = std::max(worst, diff / denom);
  }
  return worst;
}

bool selftest_fd(std::ostream& err) {
  constexpr double kH = 1e-4;
  constexpr double kTol = 1e-4;
  LossConfig cfg;
  bool ok = true;
  for (int instance = 0; instance < 3; ++instance) {
    Rng rng(7000 + instance);
    DepthMap pred, gt, mono;
    double kink = 0.0;
    for (int attempt = 0; attempt < 64; ++attempt) {
      pred = random_depth_map(rng, 8, 8, 1.0, 10.0);
      gt = random_depth_map(rng, 8, 8, 1.0, 10.0, 0.4);
      mono = random_depth_map(rng, 8, 8, 1.0, 10.0);
      kink = min_kink_distance(pred, gt, mono, cfg);
      if (kink > 50.0 * kH) break;
    }
    if (kink <= 50.0 * kH) {
      err << "selftest fd: could not find a kink-free instance\n";
      return false;
    }

    const double e_l1 = fd_max_rel_err(pred, [&](const DepthMap& p) {
      const LossValue v = l1_masked(p, gt);
      return std::make_pair(v.value, v.grad);
    }, kH);
    const double e_ssi = fd_max_rel_err(pred, [&](const DepthMap& p) {
      const SsiResult v = ssi_loss(p, mono);
      return std::make_pair(v.value, v.grad);
    }, kH);
    const double e_gm = fd_max_rel_err(pred, [&](const DepthMap& p) {
      const LossValue v = gradient_matching(p, mono, cfg.pyramid_levels);
      return std::make_pair(v.value, v.grad);
    }, kH);
    const double e_comb = fd_max_rel_err(pred, [&](const DepthMap& p) {
      const LossReport v = combined_loss(p, gt, mono, cfg);
      return std::make_pair(v.total, v.grad_total);
    }, kH);
    for (double e : {e_l1, e_ssi, e_gm, e_comb}) {
      if (!(e < kTol)) {
        err << "selftest fd: max rel err " << e << " on instance " << instance << "\n";
        ok = false;
      }
    }
  }
  return ok;
}

std::optional<RayHit> brute_force_cast(const TriangleMesh& mesh, const Vec3& dir) {
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
      best.t = hit->t;
      best.triangle = i;
      best.b0 = hit->b0;
      best.b1 = hit->b1;
      best.b2 = hit->b2;
    }
  }
  if (!found) return std::nullopt;
  best.point = best.t * dir;
  return best;
}

DepthMap smooth_random_map(Rng& rng, int w, int h, double base, double amplitude) {
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

bool selftest_bvh(std::ostream& err) {
  Rng rng(99);
  const int w = 48, h = 36;
  const DepthMap depth = smooth_random_map(rng, w, h, 5.0, 0.5);
  const Intrinsics K{40.0, 40.0, w / 2.0, h / 2.0};
  const TriangleMesh mesh = grid_mesh(depth, K);
  const Bvh bvh = build_bvh(mesh);
  for (int i = 0; i < 300; ++i) {
    const double u = rng.uniform(0.0, w - 1.0);
    const double v = rng.uniform(0.0, h - 1.0);
    const Vec3 dir = normalized({(u - K.cx) / K.fx, (v - K.cy) / K.fy, 1.0});
    const auto fast = cast(bvh, mesh, dir);
    const auto slow = brute_force_cast(mesh, dir);
    if (fast.has_value() != slow.has_value()) {
      err << "selftest bvh: hit/miss disagreement on ray " << i << "\n";
      return false;
    }
    if (fast && (fast->triangle != slow->triangle || std::abs(fast->t - slow->t) > 1e-9)) {
      err << "selftest bvh: nearest-hit disagreement on ray " << i << "\n";
      return false;
    }
  }
  return true;
}

bool roundtrip_scene(const DepthMap& depth, std::ostream& err, const char* label) {
  const int w = depth.width();
  const int h = depth.height();
  const Intrinsics K{60.0, 60.0, w / 2.0, h / 2.0};
  ScanConfig scan;
  scan.mode = ScanMode::random_pixels;
  scan.dropout = 0.0;
  const SimulationResult sim = simulate(w, h, depth, K, scan, MeshingConfig{}, 1);
  std::size_t checked = 0;
  std::size_t good = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!sim.sparse.valid_at(x, y)) continue;
      ++checked;
      const double got = sim.sparse.at(x, y);
      const double want = depth.at(x, y);
      if (std::abs(got - want) / want <= 1e-3) ++good;
    }
  }
  const double hit_fraction = static_cast<double>(checked) / depth.size();
  const double good_fraction = checked == 0 ? 0.0 : static_cast<double>(good) / checked;
  if (hit_fraction < 0.99 || good_fraction < 0.99) {
    err << "selftest round-trip (" << label << "): hit fraction " << hit_fraction
        << ", accurate fraction " << good_fraction << "\n";
    return false;
  }
  return true;
}

bool selftest_roundtrip(std::ostream& err) {
  const int w = 64, h = 48;
  if (!roundtrip_scene(DepthMap::constant(w, h, 2.5), err, "plane")) return false;
  std::vector<double> sloped(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      sloped[static_cast<std::size_t>(y) * w + x] = 2.0 + 0.01 * x + 0.005 * y;
    }
  }
  return roundtrip_scene(DepthMap::dense(w, h, std::move(sloped)), err, "slope");
}

bool selftest_affine(std::ostream& err) {
  for (int i = 0; i < 12; ++i) {
    Rng rng(4200 + i);
    const DepthMap pred = random_depth_map(rng, 16, 16, 1.0, 10.0);
    const DepthMap mono = random_depth_map(rng, 16, 16, 1.0, 10.0);
    const double alpha = rng.uniform(0.1, 4.0);
    const double beta = rng.uniform(-3.0, 3.0);
    MaskedGrid warped = mono.grid();
    for (std::size_t j = 0; j < warped.size(); ++j) {
      if (warped.valid[j]) warped.values[j] = alpha * warped.values[j] + beta;
    }
    // keep the warped map a legal depth map
    bool positive = true;
    for (std::size_t j = 0; j < warped.size(); ++j) {
      if (warped.valid[j] && warped.values[j] <= 0.0) positive = false;
    }
    if (!positive) continue;
    const double a = ssi_loss(pred, mono).value;
    const double b = ssi_loss(pred, DepthMap::from_grid(std::move(warped))).value;
    if (!(std::abs(a - b) < 1e-9)) {
      err << "selftest affine: |" << a << " - " << b << "| >= 1e-9\n";
      return false;
    }
  }
  return true;
}

}  // namespace

int run_selftest(std::ostream& out, std::ostream& err) {
  bool all_ok = true;
  const auto report = [&](const char* name, bool ok) {
    out << (ok ? "[pass] " : "[FAIL] ") << name << "\n";
    all_ok = all_ok && ok;
  };
  report("fd-gradients", selftest_fd(err));
  report("bvh-oracle", selftest_bvh(err));
  report("round-trip", selftest_roundtrip(err));
  report("affine-invariance", selftest_affine(err));
  return all_ok ? kExitOk : kExitSelftest;
}

}  // namespace depthkit
