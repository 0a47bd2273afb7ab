#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "depthkit/errors.hpp"
#include "depthkit/metrics.hpp"

namespace depthkit {

/// CLI exit taxonomy: 0 success, 2 usage/config, 3 io, 4 data/mask,
/// 5 selftest failure, 6 insufficient data for alignment.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitIo = 3,
  kExitData = 4,
  kExitSelftest = 5,
  kExitInsufficientData = 6,
};

int exit_code_for(ErrorCode code) noexcept;

struct GenArgs {
  std::filesystem::path mono_path;  // file, or directory for batch mode
  std::optional<std::filesystem::path> image_path;
  std::optional<std::filesystem::path> config_path;
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool export_mesh = false;
};

struct LossArgs {
  std::filesystem::path pred_path;
  std::filesystem::path gt_path;
  std::filesystem::path mono_path;
  std::optional<std::filesystem::path> config_path;
  std::optional<std::filesystem::path> dump_grad_path;
};

struct EvalArgs {
  std::filesystem::path pred_path;  // file or directory
  std::filesystem::path gt_path;
  MetricUnits units = MetricUnits::kitti_mm;
  std::optional<std::filesystem::path> config_path;
};

struct VizArgs {
  std::filesystem::path depth_path;
  std::filesystem::path out_path;
  std::optional<std::filesystem::path> config_path;
  bool float_input = false;  // depth file is a float map rather than png16
};

/// Simulate a sparse scan from a dense monocular depth file. Writes
/// <stem>_simu.png, <stem>_target.f64, <stem>_manifest.txt (and optionally
/// <stem>_mesh.obj) under out_dir; all outputs are staged to temp names and
/// renamed on success, so failures leave no partial files.
int run_gen(const GenArgs& args, std::ostream& out, std::ostream& err);

/// Evaluate the combined training objective of three depth files and print the
/// report as key = value lines.
int run_loss(const LossArgs& args, std::ostream& out, std::ostream& err);

/// Per-image metrics plus their arithmetic mean over matching file lists.
int run_eval(const EvalArgs& args, std::ostream& out, std::ostream& err);

/// Color-mapped 8-bit rendering of a depth file.
int run_viz(const VizArgs& args, std::ostream& out, std::ostream& err);

/// Small-scale end-to-end checks (finite-difference gradients, brute-force ray
/// casting, simulation round trip, affine invariance). Exit 0 iff all pass.
int run_selftest(std::ostream& out, std::ostream& err);

}  // namespace depthkit
