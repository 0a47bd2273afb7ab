#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace depthkit {

enum class ReduceMode { sum, mean };

/// Evaluation-order identifier. There is a single order: a pairwise tree with a
/// fixed leaf block, split at range midpoints. The tree shape depends only on
/// the input length, never on the thread count, so results are bit-identical
/// under any parallel schedule.
enum class ReduceOrder { pairwise_tree };

struct Reduction {
  ReduceMode mode = ReduceMode::sum;
  ReduceOrder order = ReduceOrder::pairwise_tree;
};

struct MaskedSum {
  double sum = 0.0;
  std::size_t count = 0;
};

/// Sum of values[i] over valid[i] != 0, pairwise tree order. n_threads <= 1 runs
/// sequentially; larger values parallelize the top of the tree.
MaskedSum masked_sum(std::span<const double> values, std::span<const std::uint8_t> valid,
                     int n_threads = 1);

/// Pairwise-tree sum of every element (no mask).
double pairwise_sum(std::span<const double> values, int n_threads = 1);

/// Sum or mean over the valid entries. Mean over an empty mask throws
/// ErrorCode::empty_mask.
double masked_reduce(std::span<const double> values, std::span<const std::uint8_t> valid,
                     Reduction reduction, int n_threads = 1);

}  // namespace depthkit
