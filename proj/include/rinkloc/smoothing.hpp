#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "rinkloc/errors.hpp"
#include "rinkloc/trajectory.hpp"

namespace rinkloc {

enum class EdgePolicy {
  Reflect,  // mirror about the end samples
  Shrink,   // drop out-of-range taps and renormalize
};

struct SmoothingConfig {
  int window_m = 14;  // window size is window_m + 1
  EdgePolicy edge = EdgePolicy::Reflect;

  int window_size() const { return window_m + 1; }
  void validate() const {
    if (window_m < 2 || window_m % 2 != 0) throw InvalidWindow("window parameter m must be even and >= 2");
  }
};

template <typename Scalar>
struct HannWindow {
  int m = 0;
  std::vector<Scalar> weights;     // 0.5 (1 - cos(2 pi n / m)), n = 0..m
  std::vector<Scalar> normalized;  // weights / sum(weights)
};

template <typename Scalar = double>
HannWindow<Scalar> hann_coeffs(int m) {
  if (m < 2 || m % 2 != 0) throw InvalidWindow("window parameter m must be even and >= 2");
  HannWindow<Scalar> w;
  w.m = m;
  w.weights.assign(std::size_t(m) + 1, Scalar(0));
  // Evaluate the first half and mirror it so the window is exactly symmetric.
  for (int n = 0; n <= m / 2; ++n) {
    const Scalar v = Scalar(0.5) * (Scalar(1) - std::cos(Scalar(2) * std::numbers::pi_v<Scalar> * (Scalar(n) / Scalar(m))));
    w.weights[std::size_t(n)] = v;
    w.weights[std::size_t(m - n)] = v;
  }
  Scalar sum = 0;
  for (Scalar v : w.weights) sum += v;
  w.normalized.resize(w.weights.size());
  for (std::size_t i = 0; i < w.weights.size(); ++i) w.normalized[i] = w.weights[i] / sum;
  return w;
}

namespace detail {

inline std::size_t reflect_index(std::ptrdiff_t k, std::size_t n) {
  if (n == 1) return 0;
  const std::ptrdiff_t period = 2 * (std::ptrdiff_t(n) - 1);
  std::ptrdiff_t j = k % period;
  if (j < 0) j += period;
  if (j >= std::ptrdiff_t(n)) j = period - j;
  return std::size_t(j);
}

}  // namespace detail

/// Sample indices and weights that produce output sample `i` of a length-`n`
/// series. Zero-weight taps are omitted; weights sum to 1.
inline std::vector<std::pair<std::size_t, double>> window_support(std::size_t i, std::size_t n,
                                                                  const SmoothingConfig& config) {
  config.validate();
  const auto window = hann_coeffs<double>(config.window_m);
  const std::ptrdiff_t half = config.window_m / 2;
  std::vector<std::pair<std::size_t, double>> taps;
  double used = 0;
  for (std::ptrdiff_t t = 0; t <= config.window_m; ++t) {
    const double w = window.normalized[std::size_t(t)];
    if (w == 0.0) continue;
    const std::ptrdiff_t k = std::ptrdiff_t(i) + t - half;
    if (config.edge == EdgePolicy::Shrink) {
      if (k < 0 || k >= std::ptrdiff_t(n)) continue;
      taps.emplace_back(std::size_t(k), w);
    } else {
      taps.emplace_back(detail::reflect_index(k, n), w);
    }
    used += w;
  }
  for (auto& tap : taps) tap.second /= used;
  return taps;
}

/// Hann-weighted moving average. The result is a convex combination of the
/// window's samples, clamped to their range so constants pass through exactly.
template <typename Scalar>
std::vector<Scalar> smooth_series(std::span<const Scalar> values, const SmoothingConfig& config) {
  config.validate();
  const auto window = hann_coeffs<Scalar>(config.window_m);
  const std::size_t n = values.size();
  const std::ptrdiff_t half = config.window_m / 2;
  std::vector<Scalar> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    Scalar acc = 0, used = 0;
    Scalar lo = values[i], hi = values[i];
    for (std::ptrdiff_t t = 0; t <= config.window_m; ++t) {
      const Scalar w = window.normalized[std::size_t(t)];
      if (w == Scalar(0)) continue;
      const std::ptrdiff_t k = std::ptrdiff_t(i) + t - half;
      std::size_t idx;
      if (config.edge == EdgePolicy::Shrink) {
        if (k < 0 || k >= std::ptrdiff_t(n)) continue;
        idx = std::size_t(k);
      } else {
        idx = detail::reflect_index(k, n);
      }
      const Scalar x = values[idx];
      acc += w * x;
      used += w;
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    out[i] = std::clamp(acc / used, lo, hi);
  }
  return out;
}

template <typename Scalar>
std::vector<Scalar> smooth_series(const std::vector<Scalar>& values, const SmoothingConfig& config) {
  return smooth_series(std::span<const Scalar>(values), config);
}

// Smooths each of the eight coordinate series independently.
Trajectory smooth_trajectory(const Trajectory& traj, const SmoothingConfig& config = {});

// DLT from the frame control points onto each smoothed quadruple.
std::vector<Homographyd> smoothed_homographies(const Trajectory& traj, const FrameDims& dims,
                                               const SmoothingConfig& config = {});

}  // namespace rinkloc
