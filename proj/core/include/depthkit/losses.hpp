#pragma once

#include <vector>

#include "depthkit/depth_map.hpp"

namespace depthkit {

/// Affine alignment of a monocular map to a prediction. degenerate marks the
/// zero-variance fallback (s pinned to 1, shift-only).
struct AlignmentParams {
  double s = 1.0;
  double b = 0.0;
  bool degenerate = false;
};

enum class SsiSolver {
  ls,   // closed-form least squares (default)
  lad,  // iteratively reweighted L1 refinement seeded from ls
};

enum class GradMode {
  full,      // differentiate through the closed-form (s, b)
  detached,  // hold (s, b) constant
};

struct LossWeights {
  double w_sup = 1.0;
  double w_ssi = 1.0;
  double w_reg = 0.5;
};

/// A scalar loss and its gradient with respect to the prediction, row-major,
/// zero wherever the prediction is invalid or the term's mask does not reach.
struct LossValue {
  double value = 0.0;
  std::vector<double> grad;
};

/// Mean absolute error over the joint valid mask. Gradient is sign(pred -
/// target)/N with subgradient 0 at exact ties. Also serves as the dense
/// pre-training L1 when the target is an all-valid map.
LossValue l1_masked(const DepthMap& pred, const DepthMap& target);

/// Optimal (s, b) minimizing sum (pred - s*mono - b)^2 over the joint mask via
/// the 2x2 normal equations; `lad` refines toward the L1 objective. Fewer than
/// two jointly valid pixels -> insufficient_data; var(mono) < 1e-12 -> the
/// degenerate shift-only fallback.
AlignmentParams ssi_align(const DepthMap& pred, const DepthMap& mono,
                          SsiSolver solver = SsiSolver::ls);

struct SsiResult {
  double value = 0.0;
  std::vector<double> grad;
  AlignmentParams align;
};

/// Scale/shift-invariant loss: mean |pred - (s*mono + b)| at the solved
/// alignment. In full mode the gradient includes the dependence of (s, b) on
/// the prediction (closed-form ls only; lad always detaches).
SsiResult ssi_loss(const DepthMap& pred, const DepthMap& mono, SsiSolver solver = SsiSolver::ls,
                   GradMode grad_mode = GradMode::full);

/// Multi-scale gradient matching: K-level valid-aware pyramid of the residual,
/// L1 of forward differences at every level, normalized by the level-0 valid
/// count. The MaskedGrid overload exists because aligned residual inputs may be
/// negative.
LossValue gradient_matching(const MaskedGrid& pred, const MaskedGrid& mono_aligned, int levels = 4);
LossValue gradient_matching(const DepthMap& pred, const DepthMap& mono_aligned, int levels = 4);

struct LossConfig {
  LossWeights weights;
  SsiSolver solver = SsiSolver::ls;
  GradMode grad_mode = GradMode::full;
  int pyramid_levels = 4;
  /// Gradient matching runs on pred - (s*mono + b) by default; false uses the
  /// raw residual pred - mono.
  bool reg_on_aligned = true;
};

struct LossReport {
  double sup = 0.0;
  double ssi = 0.0;
  double reg = 0.0;
  double total = 0.0;
  AlignmentParams alignment;
  std::vector<double> grad_total;
};

/// total = w_sup * l1_masked(pred, sparse_gt) + w_ssi * ssi_loss(pred, mono)
///       + w_reg * gradient_matching(pred, s*mono + b), with the full gradient
/// chained through the alignment when grad_mode = full.
LossReport combined_loss(const DepthMap& pred, const DepthMap& sparse_gt, const DepthMap& mono,
                         const LossConfig& cfg = {});

void validate(const LossWeights& weights);

}  // namespace depthkit
