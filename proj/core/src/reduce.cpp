#include "depthkit/reduce.hpp"

#include <future>

#include "depthkit/errors.hpp"

namespace depthkit {
namespace {

constexpr std::size_t kLeafBlock = 256;

// Sequential within a leaf block, pairwise at midpoints above it. The split
// points are a function of [lo, hi) alone.
template <typename Leaf>
MaskedSum tree_reduce(std::size_t lo, std::size_t hi, int par_depth, const Leaf& leaf) {
  if (hi - lo <= kLeafBlock) return leaf(lo, hi);
  const std::size_t mid = lo + (hi - lo) / 2;
  if (par_depth > 0) {
    auto right = std::async(std::launch::async, [&] {
      return tree_reduce(mid, hi, par_depth - 1, leaf);
    });
    MaskedSum l = tree_reduce(lo, mid, par_depth - 1, leaf);
    MaskedSum r = right.get();
    return {l.sum + r.sum, l.count + r.count};
  }
  MaskedSum l = tree_reduce(lo, mid, 0, leaf);
  MaskedSum r = tree_reduce(mid, hi, 0, leaf);
  return {l.sum + r.sum, l.count + r.count};
}

int depth_for_threads(int n_threads) {
  int depth = 0;
  while ((1 << depth) < n_threads && depth < 8) ++depth;
  return depth;
}

}  // namespace

MaskedSum masked_sum(std::span<const double> values, std::span<const std::uint8_t> valid,
                     int n_threads) {
  if (values.size() != valid.size()) {
    raise(ErrorCode::invalid_argument, "masked_sum: value and mask sizes differ");
  }
  auto leaf = [&](std::size_t lo, std::size_t hi) {
    MaskedSum acc;
    for (std::size_t i = lo; i < hi; ++i) {
      if (valid[i]) {
        acc.sum += values[i];
        ++acc.count;
      }
    }
    return acc;
  };
  return tree_reduce(0, values.size(), depth_for_threads(n_threads), leaf);
}

double pairwise_sum(std::span<const double> values, int n_threads) {
  auto leaf = [&](std::size_t lo, std::size_t hi) {
    MaskedSum acc;
    for (std::size_t i = lo; i < hi; ++i) acc.sum += values[i];
    acc.count = hi - lo;
    return acc;
  };
  return tree_reduce(0, values.size(), depth_for_threads(n_threads), leaf).sum;
}

double masked_reduce(std::span<const double> values, std::span<const std::uint8_t> valid,
                     Reduction reduction, int n_threads) {
  MaskedSum acc = masked_sum(values, valid, n_threads);
  if (reduction.mode == ReduceMode::sum) return acc.sum;
  if (acc.count == 0) raise(ErrorCode::empty_mask, "masked_reduce: mean over empty mask");
  return acc.sum / static_cast<double>(acc.count);
}

}  // namespace depthkit
