#include "depthkit/losses.hpp"

#include <cmath>

#include "depthkit/errors.hpp"
#include "depthkit/pyramid.hpp"
#include "depthkit/reduce.hpp"

namespace depthkit {

void validate(const LossWeights& w) {
  if (w.w_sup < 0.0 || w.w_ssi < 0.0 || w.w_reg < 0.0 ||
      (w.w_sup == 0.0 && w.w_ssi == 0.0 && w.w_reg == 0.0)) {
    raise(ErrorCode::invalid_argument, "LossWeights: weights must be >= 0 and not all zero");
  }
}

namespace {

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void require_same_dims(const MaskedGrid& a, const MaskedGrid& b, const char* op) {
  if (a.width != b.width || a.height != b.height) {
    raise(ErrorCode::invalid_argument, std::string(op) + ": grids must share dimensions");
  }
}

std::vector<std::uint8_t> joint_mask(std::span<const std::uint8_t> a,
                                     std::span<const std::uint8_t> b) {
  std::vector<std::uint8_t> mask(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) mask[i] = a[i] && b[i];
  return mask;
}

// sufficient statistics of the alignment problem over a joint mask
struct AlignStats {
  std::size_t n = 0;
  double mean_mono = 0.0;
  double mean_pred = 0.0;
  double var_sum = 0.0;  // sum (mono - mean_mono)^2
  double cov_sum = 0.0;  // sum (mono - mean_mono)(pred - mean_pred)
};

AlignStats align_stats(std::span<const double> pred, std::span<const double> mono,
                       std::span<const std::uint8_t> mask) {
  AlignStats st;
  const MaskedSum sp = masked_sum(pred, mask);
  const MaskedSum sm = masked_sum(mono, mask);
  st.n = sp.count;
  if (st.n == 0) return st;
  st.mean_pred = sp.sum / static_cast<double>(st.n);
  st.mean_mono = sm.sum / static_cast<double>(st.n);
  std::vector<double> mm(pred.size(), 0.0);
  std::vector<double> mp(pred.size(), 0.0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!mask[i]) continue;
    const double cm = mono[i] - st.mean_mono;
    mm[i] = cm * cm;
    mp[i] = cm * (pred[i] - st.mean_pred);
  }
  st.var_sum = masked_sum(mm, mask).sum;
  st.cov_sum = masked_sum(mp, mask).sum;
  return st;
}

AlignmentParams solve_ls(const AlignStats& st) {
  AlignmentParams align;
  if (st.var_sum / static_cast<double>(st.n) < 1e-12) {
    align.s = 1.0;
    align.b = st.mean_pred - st.mean_mono;
    align.degenerate = true;
    return align;
  }
  align.s = st.cov_sum / st.var_sum;
  align.b = st.mean_pred - align.s * st.mean_mono;
  return align;
}

AlignmentParams refine_lad(std::span<const double> pred, std::span<const double> mono,
                           std::span<const std::uint8_t> mask, AlignmentParams align) {
  if (align.degenerate) return align;
  constexpr int kMaxIters = 40;
  constexpr double kResidualFloor = 1e-9;
  for (int iter = 0; iter < kMaxIters; ++iter) {
    double sw = 0.0, swm = 0.0, swp = 0.0, swmm = 0.0, swmp = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      if (!mask[i]) continue;
      const double r = pred[i] - align.s * mono[i] - align.b;
      const double w = 1.0 / std::max(std::abs(r), kResidualFloor);
      sw += w;
      swm += w * mono[i];
      swp += w * pred[i];
      swmm += w * mono[i] * mono[i];
      swmp += w * mono[i] * pred[i];
    }
    const double det = sw * swmm - swm * swm;
    if (std::abs(det) < 1e-18 * (1.0 + sw * swmm)) break;
    const double s_new = (sw * swmp - swm * swp) / det;
    const double b_new = (swp - s_new * swm) / sw;
    const bool converged = std::abs(s_new - align.s) < 1e-12 * (1.0 + std::abs(align.s)) &&
                           std::abs(b_new - align.b) < 1e-12 * (1.0 + std::abs(align.b));
    align.s = s_new;
    align.b = b_new;
    if (converged) break;
  }
  return align;
}

struct SsiInternals {
  AlignmentParams align;
  std::vector<std::uint8_t> mask;
  std::size_t n = 0;
  AlignStats stats;
};

SsiInternals align_internal(const DepthMap& pred, const DepthMap& mono, SsiSolver solver) {
  require_same_dims(pred.grid(), mono.grid(), "ssi_align");
  SsiInternals out;
  out.mask = joint_mask(pred.valid(), mono.valid());
  out.stats = align_stats(pred.values(), mono.values(), out.mask);
  out.n = out.stats.n;
  if (out.n < 2) {
    raise(ErrorCode::insufficient_data,
          "ssi_align: need at least 2 jointly valid pixels, have " + std::to_string(out.n));
  }
  out.align = solve_ls(out.stats);
  if (solver == SsiSolver::lad) {
    out.align = refine_lad(pred.values(), mono.values(), out.mask, out.align);
  }
  return out;
}

}  // namespace

LossValue l1_masked(const DepthMap& pred, const DepthMap& target) {
  require_same_dims(pred.grid(), target.grid(), "l1_masked");
  const auto mask = joint_mask(pred.valid(), target.valid());
  std::vector<double> abs_diff(pred.size(), 0.0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (mask[i]) abs_diff[i] = std::abs(pred.values()[i] - target.values()[i]);
  }
  const MaskedSum acc = masked_sum(abs_diff, mask);
  if (acc.count == 0) raise(ErrorCode::empty_mask, "l1_masked: no jointly valid pixel");

  LossValue out;
  out.value = acc.sum / static_cast<double>(acc.count);
  out.grad.assign(pred.size(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(acc.count);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (mask[i]) out.grad[i] = sign(pred.values()[i] - target.values()[i]) * inv_n;
  }
  return out;
}

AlignmentParams ssi_align(const DepthMap& pred, const DepthMap& mono, SsiSolver solver) {
  return align_internal(pred, mono, solver).align;
}

SsiResult ssi_loss(const DepthMap& pred, const DepthMap& mono, SsiSolver solver,
                   GradMode grad_mode) {
  const SsiInternals in = align_internal(pred, mono, solver);
  const double s = in.align.s;
  const double b = in.align.b;
  const double n = static_cast<double>(in.n);

  std::vector<double> abs_r(pred.size(), 0.0);
  std::vector<double> sgn(pred.size(), 0.0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!in.mask[i]) continue;
    const double r = pred.values()[i] - (s * mono.values()[i] + b);
    abs_r[i] = std::abs(r);
    sgn[i] = sign(r);
  }

  SsiResult out;
  out.align = in.align;
  out.value = masked_sum(abs_r, in.mask).sum / n;
  out.grad.assign(pred.size(), 0.0);

  // closed-form (s, b) makes the chain terms cheap:
  //   ds/dp_j = (m_j - mean_m) / V,   db/dp_j = 1/n - mean_m * ds/dp_j
  //   dL/dp_j = [sgn_j - S1/n - (m_j - mean_m) * C / V] / n
  // with S1 = sum sgn_i and C = sum sgn_i (m_i - mean_m).
  const bool chain = grad_mode == GradMode::full && solver == SsiSolver::ls;
  double s1 = 0.0;
  double c = 0.0;
  if (chain) {
    std::vector<double> centered(pred.size(), 0.0);
    for (std::size_t i = 0; i < pred.size(); ++i) {
      if (in.mask[i]) centered[i] = sgn[i] * (mono.values()[i] - in.stats.mean_mono);
    }
    s1 = masked_sum(sgn, in.mask).sum;
    c = masked_sum(centered, in.mask).sum;
  }
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!in.mask[i]) continue;
    double g = sgn[i];
    if (chain) {
      g -= s1 / n;
      if (!in.align.degenerate) g -= (mono.values()[i] - in.stats.mean_mono) * c / in.stats.var_sum;
    }
    out.grad[i] = g / n;
  }
  return out;
}

LossValue gradient_matching(const MaskedGrid& pred, const MaskedGrid& mono_aligned, int levels) {
  require_same_dims(pred, mono_aligned, "gradient_matching");
  if (levels < 1) raise(ErrorCode::invalid_argument, "gradient_matching: levels must be >= 1");

  MaskedGrid residual(pred.width, pred.height);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred.valid[i] && mono_aligned.valid[i]) {
      residual.values[i] = pred.values[i] - mono_aligned.values[i];
      residual.valid[i] = 1;
    }
  }
  const std::size_t n0 = residual.valid_count();
  if (n0 == 0) raise(ErrorCode::empty_mask, "gradient_matching: no jointly valid pixel");
  const double inv_n = 1.0 / static_cast<double>(n0);

  const std::vector<MaskedGrid> pyr = build_grid_pyramid(residual, levels);

  double total = 0.0;
  std::vector<std::vector<double>> level_grad(pyr.size());
  for (std::size_t k = 0; k < pyr.size(); ++k) {
    const MaskedGrid& g = pyr[k];
    level_grad[k].assign(g.size(), 0.0);
    std::vector<double> abs_terms;
    abs_terms.reserve(2 * g.size());
    for (int y = 0; y < g.height; ++y) {
      for (int x = 0; x < g.width; ++x) {
        if (!g.valid_at(x, y)) continue;
        if (x + 1 < g.width && g.valid_at(x + 1, y)) {
          const double d = g.at(x + 1, y) - g.at(x, y);
          abs_terms.push_back(std::abs(d));
          const double sg = sign(d) * inv_n;
          level_grad[k][g.index(x + 1, y)] += sg;
          level_grad[k][g.index(x, y)] -= sg;
        }
        if (y + 1 < g.height && g.valid_at(x, y + 1)) {
          const double d = g.at(x, y + 1) - g.at(x, y);
          abs_terms.push_back(std::abs(d));
          const double sg = sign(d) * inv_n;
          level_grad[k][g.index(x, y + 1)] += sg;
          level_grad[k][g.index(x, y)] -= sg;
        }
      }
    }
    total += pairwise_sum(abs_terms);
  }

  // pull level gradients back through the pooling chain
  for (std::size_t k = pyr.size() - 1; k > 0; --k) {
    const std::vector<double> back = downsample_backward(pyr[k - 1], pyr[k], level_grad[k]);
    for (std::size_t i = 0; i < back.size(); ++i) level_grad[k - 1][i] += back[i];
  }

  LossValue out;
  out.value = total * inv_n;
  out.grad = std::move(level_grad[0]);
  return out;
}

LossValue gradient_matching(const DepthMap& pred, const DepthMap& mono_aligned, int levels) {
  return gradient_matching(pred.grid(), mono_aligned.grid(), levels);
}

LossReport combined_loss(const DepthMap& pred, const DepthMap& sparse_gt, const DepthMap& mono,
                         const LossConfig& cfg) {
  validate(cfg.weights);
  require_same_dims(pred.grid(), sparse_gt.grid(), "combined_loss");
  require_same_dims(pred.grid(), mono.grid(), "combined_loss");

  const LossValue sup = l1_masked(pred, sparse_gt);
  const SsiInternals in = align_internal(pred, mono, cfg.solver);
  const SsiResult ssi = ssi_loss(pred, mono, cfg.solver, cfg.grad_mode);

  // residual target for the regularizer: aligned mono (or raw mono)
  MaskedGrid target(mono.width(), mono.height());
  for (std::size_t i = 0; i < mono.size(); ++i) {
    if (!mono.valid()[i]) continue;
    target.values[i] =
        cfg.reg_on_aligned ? in.align.s * mono.values()[i] + in.align.b : mono.values()[i];
    target.valid[i] = 1;
  }
  const LossValue reg = gradient_matching(pred.grid(), target, cfg.pyramid_levels);

  LossReport report;
  report.sup = sup.value;
  report.ssi = ssi.value;
  report.reg = reg.value;
  report.alignment = in.align;
  report.total =
      cfg.weights.w_sup * sup.value + cfg.weights.w_ssi * ssi.value + cfg.weights.w_reg * reg.value;

  std::vector<double> reg_grad = reg.grad;
  const bool chain = cfg.grad_mode == GradMode::full && cfg.solver == SsiSolver::ls &&
                     cfg.reg_on_aligned;
  if (chain) {
    // reg sees pred both directly and through (s, b); G0 is d reg / d residual,
    // so d reg/ds = -sum G0 * mono and d reg/db = -sum G0.
    std::vector<double> g_m(reg.grad.size(), 0.0);
    for (std::size_t i = 0; i < reg.grad.size(); ++i) {
      if (in.mask[i]) g_m[i] = reg.grad[i] * mono.values()[i];
    }
    const double dreg_ds = -masked_sum(g_m, in.mask).sum;
    const double dreg_db = -masked_sum(reg.grad, in.mask).sum;
    const double n = static_cast<double>(in.n);
    for (std::size_t i = 0; i < reg_grad.size(); ++i) {
      if (!in.mask[i]) continue;
      const double ds_dp =
          in.align.degenerate ? 0.0 : (mono.values()[i] - in.stats.mean_mono) / in.stats.var_sum;
      const double db_dp = 1.0 / n - in.stats.mean_mono * ds_dp;
      reg_grad[i] += dreg_ds * ds_dp + dreg_db * db_dp;
    }
  }

  report.grad_total.assign(pred.size(), 0.0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    report.grad_total[i] = cfg.weights.w_sup * sup.grad[i] + cfg.weights.w_ssi * ssi.grad[i] +
                           cfg.weights.w_reg * reg_grad[i];
  }
  return report;
}

}  // namespace depthkit
