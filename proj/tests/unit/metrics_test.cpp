#include <doctest.h>

#include <cmath>

#include "depthkit/errors.hpp"
#include "depthkit/metrics.hpp"
#include "test_support.hpp"

using namespace depthkit;

TEST_CASE("perfect predictions score zero error and full delta") {
  Rng rng(61);
  const DepthMap map = dk_test::random_map(rng, 10, 8, 1.0, 50.0, 0.7);
  const MetricsReport r = evaluate(map, map);
  CHECK(r.rmse == 0.0);
  CHECK(r.mae == 0.0);
  CHECK(r.irmse == 0.0);
  CHECK(r.imae == 0.0);
  CHECK(r.rel == 0.0);
  for (const auto& [theta, frac] : r.delta) CHECK(frac == 1.0);
  CHECK(r.n_valid == map.valid_count());
}

TEST_CASE("two-pixel hand example in KITTI units") {
  const DepthMap pred = DepthMap::dense(2, 1, {2.0, 2.0});
  const DepthMap gt = DepthMap::dense(2, 1, {1.0, 3.0});
  const MetricsReport r = evaluate(pred, gt);
  CHECK(std::abs(r.rmse - 1000.0) < 1e-9);
  CHECK(std::abs(r.mae - 1000.0) < 1e-9);
  CHECK(std::abs(r.rel - 2.0 / 3.0) < 1e-9);
  // same example in meters
  const MetricsReport m = evaluate(pred, gt, default_delta_thresholds(), MetricUnits::nyu_m);
  CHECK(std::abs(m.rmse - 1.0) < 1e-12);
  CHECK(std::abs(m.mae - 1.0) < 1e-12);
  CHECK(m.irmse == doctest::Approx(r.irmse / 1000.0).epsilon(1e-12));
}

TEST_CASE("a uniform 1.3x over-prediction fails delta(1.25) and passes delta(1.5625)") {
  Rng rng(62);
  const DepthMap gt = dk_test::random_map(rng, 8, 8, 1.0, 30.0);
  MaskedGrid scaled = gt.grid();
  for (auto& v : scaled.values) v *= 1.3;
  const MetricsReport r = evaluate(DepthMap::from_grid(std::move(scaled)), gt);
  CHECK(r.delta[0].second == 0.0);
  CHECK(r.delta[1].second == 1.0);
  CHECK(r.delta[2].second == 1.0);
}

TEST_CASE("rmse dominates mae and delta is monotone in the threshold") {
  Rng rng(63);
  for (int i = 0; i < 100; ++i) {
    const DepthMap pred = dk_test::random_map(rng, 8, 8, 0.5, 60.0, 0.8);
    const DepthMap gt = dk_test::random_map(rng, 8, 8, 0.5, 60.0, 0.8);
    if (pred.valid_count() == 0) continue;
    bool joint = false;
    for (std::size_t j = 0; j < pred.size(); ++j) joint = joint || (pred.valid()[j] && gt.valid()[j]);
    if (!joint) continue;
    const std::vector<double> thresholds = {1.05, 1.25, 1.5625, 1.953125, 3.0};
    const MetricsReport r = evaluate(pred, gt, thresholds);
    CHECK(r.rmse >= r.mae);
    for (std::size_t k = 1; k < r.delta.size(); ++k) {
      CHECK(r.delta[k].second >= r.delta[k - 1].second);
    }
  }
}

TEST_CASE("rmse, mae and delta are symmetric in pred/gt; rel is not") {
  Rng rng(64);
  const DepthMap a = dk_test::random_map(rng, 12, 12, 1.0, 40.0);
  const DepthMap b = dk_test::random_map(rng, 12, 12, 1.0, 40.0);
  const MetricsReport ab = evaluate(a, b);
  const MetricsReport ba = evaluate(b, a);
  CHECK(ab.rmse == doctest::Approx(ba.rmse).epsilon(1e-12));
  CHECK(ab.mae == doctest::Approx(ba.mae).epsilon(1e-12));
  for (std::size_t k = 0; k < ab.delta.size(); ++k) {
    CHECK(ab.delta[k].second == ba.delta[k].second);
  }
  CHECK(ab.rel != ba.rel);
}

TEST_CASE("disjoint masks raise empty_mask") {
  MaskedGrid a(2, 1), b(2, 1);
  a.set(0, 0, 1.0);
  b.set(1, 0, 1.0);
  try {
    evaluate(DepthMap::from_grid(std::move(a)), DepthMap::from_grid(std::move(b)));
    FAIL("expected empty_mask");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::empty_mask);
  }
}

TEST_CASE("inverse metrics use 1/km in KITTI units") {
  // pred 2 m vs gt 4 m: inverse error = |0.5 - 0.25| = 0.25 1/m = 250 1/km
  const MetricsReport r = evaluate(DepthMap::constant(1, 1, 2.0), DepthMap::constant(1, 1, 4.0));
  CHECK(std::abs(r.irmse - 250.0) < 1e-9);
  CHECK(std::abs(r.imae - 250.0) < 1e-9);
}
