#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <variant>
#include <vector>

#include "rinkloc/simulator.hpp"
#include "rinkloc/trajectory.hpp"

namespace rinkloc {

// Trajectory CSV: header `frame,x1,y1,x2,y2,x3,y3,x4,y4`, one row per frame.
Trajectory parse_trajectory_csv(std::istream& in);
Trajectory load_predictions(const std::filesystem::path& path);
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
void save_trajectory(const std::filesystem::path& path, const Trajectory& traj);

// Homography sidecar: {"frames": [{"index": i, "H": [9 reals, row-major]}]}.
struct IndexedHomography {
  std::int64_t index = 0;
  Homographyd h;
};
std::vector<IndexedHomography> load_homographies(const std::filesystem::path& path);
void save_homographies(const std::filesystem::path& path, const std::vector<Homographyd>& hs,
                       std::int64_t first_frame = 0);

struct FileBacked {
  std::filesystem::path path;
};

/// Stand-in for a trained regressor: ground truth from a simulated camera
/// plus i.i.d. Gaussian noise of `sigma` model px on every coordinate.
struct SyntheticOracle {
  CameraPath path;
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

using PredictionSource = std::variant<FileBacked, SyntheticOracle>;

struct SyntheticPredictions {
  Trajectory predictions;
  std::vector<Homographyd> ground_truth;
};

// Noise is drawn from mt19937_64(seed) through std::normal_distribution in
// frame, point, x-then-y order.
SyntheticPredictions synthetic_predictions(const SyntheticOracle& source, const FrameDims& dims,
                                           std::int64_t n_frames);

Trajectory add_gaussian_noise(const Trajectory& traj, double sigma, std::uint64_t seed);

Trajectory predict(const PredictionSource& source, const FrameDims& dims, std::int64_t n_frames);

}  // namespace rinkloc
