#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "rinkloc/smoothing.hpp"

using namespace rinkloc;

namespace {

SmoothingConfig window(int m, EdgePolicy edge = EdgePolicy::Reflect) {
  SmoothingConfig c;
  c.window_m = m;
  c.edge = edge;
  return c;
}

double variance(const std::vector<double>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
  double acc = 0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return acc / double(v.size());
}

}  // namespace

TEST_CASE("hann coefficients") {
  const auto w2 = hann_coeffs(2);
  CHECK(w2.weights == std::vector<double>{0, 1, 0});
  CHECK(w2.normalized == std::vector<double>{0, 1, 0});

  const auto w4 = hann_coeffs(4);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(w4.weights[i] == doctest::Approx(std::vector<double>{0, 0.5, 1, 0.5, 0}[i]).epsilon(1e-15));
    CHECK(w4.normalized[i] == doctest::Approx(std::vector<double>{0, 0.25, 0.5, 0.25, 0}[i]).epsilon(1e-15));
  }

  const auto w14 = hann_coeffs(14);
  REQUIRE(w14.weights.size() == 15);
  CHECK(w14.weights[7] == 1.0);
  for (int n = 0; n <= 14; ++n) CHECK(w14.weights[std::size_t(n)] == w14.weights[std::size_t(14 - n)]);
  CHECK(*std::max_element(w14.weights.begin(), w14.weights.end()) == 1.0);

  CHECK_THROWS_AS(hann_coeffs(3), InvalidWindow);
  CHECK_THROWS_AS(hann_coeffs(0), InvalidWindow);
  CHECK_THROWS_AS(hann_coeffs(-2), InvalidWindow);
}

TEST_CASE("smooth_series examples") {
  CHECK(smooth_series(std::vector<double>{5, 5, 5, 5, 5}, window(14)) == std::vector<double>{5, 5, 5, 5, 5});

  const auto impulse = smooth_series(std::vector<double>{0, 0, 1, 0, 0}, window(4));
  const std::vector<double> expected = {0, 0.25, 0.5, 0.25, 0};
  for (std::size_t i = 0; i < 5; ++i) CHECK(impulse[i] == doctest::Approx(expected[i]).epsilon(1e-15));

  const auto ramp = smooth_series(std::vector<double>{0, 1, 2, 3, 4, 5, 6}, window(4));
  for (std::size_t i = 2; i <= 4; ++i) CHECK(ramp[i] == doctest::Approx(double(i)).epsilon(1e-15));

  CHECK(smooth_series(std::vector<double>{3.5}, window(14)) == std::vector<double>{3.5});
  CHECK(smooth_series(std::vector<double>{}, window(4)).empty());
  CHECK_THROWS_AS(smooth_series(std::vector<double>{1, 2}, window(5)), InvalidWindow);
}

TEST_CASE("reflect policy matches explicit mirror-padded convolution") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 2 * std::uniform_int_distribution<int>(1, 10)(rng);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 60)(rng);
    std::vector<double> x(n);
    for (auto& v : x) v = oracle::uniform(rng, -100, 100);
    const auto got = smooth_series(x, window(m));
    const auto want = oracle::reflect_convolve(x, m);
    for (std::size_t i = 0; i < n; ++i) REQUIRE(got[i] == doctest::Approx(want[i]).epsilon(1e-12).scale(100));
  }
}

TEST_CASE("shrink policy renormalizes the truncated window") {
  const std::vector<double> x = {0, 0, 1, 0, 0};
  const auto out = smooth_series(x, window(4, EdgePolicy::Shrink));
  // At i = 0 only taps 0.5 (x0) and 0.25 (x1) survive.
  CHECK(out[0] == doctest::Approx(0.0));
  CHECK(out[1] == doctest::Approx(0.25));
  CHECK(out[2] == doctest::Approx(0.5));
  const auto ramp = smooth_series(std::vector<double>{0, 1, 2, 3, 4}, window(4, EdgePolicy::Shrink));
  CHECK(ramp[0] == doctest::Approx(1.0 / 3.0));
  CHECK(ramp[2] == doctest::Approx(2.0));
}

TEST_CASE("window support") {
  const auto taps = window_support(0, 5, window(4));
  double sum = 0;
  for (const auto& [idx, w] : taps) {
    CHECK(idx < 5);
    sum += w;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(taps.size() == 3);

  const auto shrink = window_support(0, 5, window(4, EdgePolicy::Shrink));
  CHECK(shrink.size() == 2);
  for (const auto& tap : shrink) CHECK(tap.first <= 1);
}

TEST_CASE("time reversal symmetry under reflection") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x(std::uniform_int_distribution<std::size_t>(1, 80)(rng));
    for (auto& v : x) v = oracle::uniform(rng, -10, 10);
    auto fwd = smooth_series(x, window(14));
    std::vector<double> rx(x.rbegin(), x.rend());
    auto back = smooth_series(rx, window(14));
    std::reverse(back.begin(), back.end());
    for (std::size_t i = 0; i < x.size(); ++i) REQUIRE(fwd[i] == doctest::Approx(back[i]).epsilon(1e-12).scale(10));
  }
}

TEST_CASE("convex hull bound") {
  std::mt19937_64 rng(29);
  for (auto edge : {EdgePolicy::Reflect, EdgePolicy::Shrink})
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> x(std::uniform_int_distribution<std::size_t>(1, 50)(rng));
      for (auto& v : x) v = oracle::uniform(rng, -1e3, 1e3);
      const auto cfg = window(14, edge);
      const auto out = smooth_series(x, cfg);
      for (std::size_t i = 0; i < x.size(); ++i) {
        double lo = x[i], hi = x[i];
        for (const auto& [idx, w] : window_support(i, x.size(), cfg)) {
          lo = std::min(lo, x[idx]);
          hi = std::max(hi, x[idx]);
        }
        REQUIRE(out[i] >= lo);
        REQUIRE(out[i] <= hi);
      }
    }
}

TEST_CASE("variance reduction on noisy constants") {
  std::normal_distribution<double> noise(0.0, 1.0);
  const double sum_sq = [] {
    double s = 0;
    for (double w : hann_coeffs(14).normalized) s += w * w;
    return s;
  }();
  double ratio_sum = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> x(300);
    for (auto& v : x) v = 7.0 + noise(rng);
    const double ratio = variance(smooth_series(x, window(14))) / variance(x);
    CHECK(ratio < 0.5);
    ratio_sum += ratio;
  }
  // Neighbouring outputs are correlated, so the sample ratio sits near sum(w^2).
  CHECK(ratio_sum / 100 == doctest::Approx(sum_sq).epsilon(0.25));
}

TEST_CASE("trajectory smoothing") {
  const Quadd q = control_points(FrameDims(1280, 720));
  Trajectory one(5, {q});
  const auto s1 = smooth_trajectory(one);
  CHECK(s1.first_frame == 5);
  CHECK(s1.points == one.points);

  Trajectory constant(0, std::vector<Quadd>(40, q));
  CHECK(smooth_trajectory(constant).points == constant.points);

  // Jitter around a linear pan: RMS deviation from the clean path decreases.
  std::normal_distribution<double> noise(0.0, 3.0);
  int improved = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    Trajectory clean, noisy;
    for (int f = 0; f < 120; ++f) {
      Quadd p;
      for (int k = 0; k < 4; ++k) p[k] = Point2d(100 + 0.5 * f + 10 * k, 40 + 0.1 * f + 5 * k);
      clean.points.push_back(p);
      for (auto& pt : p) pt += Point2d(noise(rng), noise(rng));
      noisy.points.push_back(p);
    }
    const auto smoothed = smooth_trajectory(noisy);
    double before = 0, after = 0;
    for (std::size_t f = 0; f < clean.size(); ++f)
      for (int k = 0; k < 4; ++k) {
        before += (noisy.points[f][k] - clean.points[f][k]).squaredNorm();
        after += (smoothed.points[f][k] - clean.points[f][k]).squaredNorm();
      }
    improved += after < before;
  }
  CHECK(improved == 100);
}

TEST_CASE("smoothed homographies") {
  const FrameDims dims(1280, 720);
  Eigen::Matrix3d m;
  m << 0.2, 0.01, 30, -0.02, 0.25, 20, 0.00001, 0.0002, 1;
  const Homographyd h(m);
  for (std::size_t n : {1u, 2u, 7u, 50u}) {
    const auto traj = trajectory_from_homographies(std::vector<Homographyd>(n, h), dims);
    for (const auto& out : smoothed_homographies(traj, dims)) CHECK(max_abs_diff(out, h) < 1e-12);
  }

  // Two frames: reflection mirrors each onto the other, both smoothed points
  // are convex combinations of the two translations.
  const auto traj = trajectory_from_homographies({Homographyd::translation(0, 0), Homographyd::translation(4, 0)},
                                                 dims);
  const auto smoothed = smooth_trajectory(traj);
  const auto hs = smoothed_homographies(traj, dims);
  REQUIRE(hs.size() == 2);
  for (std::size_t f = 0; f < 2; ++f) {
    const double dx = smoothed.points[f][0].x() - traj.points[0][0].x();
    CHECK(max_abs_diff(hs[f], Homographyd::translation(dx, 0)) < 1e-12);
  }
  // The mirrored window gives the two frames complementary weights.
  CHECK(smoothed.points[0][0].x() + smoothed.points[1][0].x() ==
        doctest::Approx(traj.points[0][0].x() + traj.points[1][0].x()));
  CHECK(smoothed.points[0][0].x() > traj.points[0][0].x());
  CHECK(smoothed.points[1][0].x() < traj.points[1][0].x());
}

TEST_CASE("degenerate smoothed frame is tagged with its index") {
  const FrameDims dims(100, 100);
  const Quadd good = control_points(dims);
  const Quadd flat = {Point2d(0, 0), Point2d(1, 0), Point2d(2, 0), Point2d(3, 0)};
  Trajectory traj(10, {good, good, flat});
  SmoothingConfig cfg;
  cfg.window_m = 2;  // identity kernel
  try {
    smoothed_homographies(traj, dims, cfg);
    FAIL("expected DegenerateConfiguration");
  } catch (const DegenerateConfiguration& e) {
    REQUIRE(e.frame());
    CHECK(*e.frame() == 12);
  }
}
