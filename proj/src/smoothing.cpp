#include "rinkloc/smoothing.hpp"

namespace rinkloc {

Trajectory smooth_trajectory(const Trajectory& traj, const SmoothingConfig& config) {
  config.validate();
  if (traj.empty()) throw InputError("cannot smooth an empty trajectory");
  Trajectory out = traj;
  for (int p = 0; p < 4; ++p)
    for (int c = 0; c < 2; ++c) {
      const auto smoothed = smooth_series(traj.series(p, c), config);
      for (std::size_t i = 0; i < smoothed.size(); ++i) out.points[i][p](c) = smoothed[i];
    }
  return out;
}

std::vector<Homographyd> smoothed_homographies(const Trajectory& traj, const FrameDims& dims,
                                               const SmoothingConfig& config) {
  return homographies_from_trajectory(smooth_trajectory(traj, config), dims);
}

}  // namespace rinkloc
