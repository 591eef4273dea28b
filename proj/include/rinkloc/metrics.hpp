#pragma once

#include <array>
#include <span>
#include <vector>

#include "rinkloc/geometry.hpp"
#include "rinkloc/polygon.hpp"
#include "rinkloc/trajectory.hpp"

namespace rinkloc {

// Sum over the four points of the squared Euclidean distance.
double squared_error(const Quadd& est, const Quadd& gt);

struct ProjectionErrorStats {
  double mean = 0;
  double variance = 0;  // population
  double median = 0;
};

// Mean, population variance and median (mean of the middle pair for even counts).
ProjectionErrorStats error_stats(std::span<const double> samples);

// Distances between the rink-model images of the frame control points.
std::array<double, 4> projection_distances(const Homographyd& est, const Homographyd& gt, const FrameDims& dims);
ProjectionErrorStats projection_error(const Homographyd& est, const Homographyd& gt, const FrameDims& dims);

// Whole frame warped onto the rink model and clipped to the model rectangle
// (counter-clockwise). Parts of the frame beyond the horizon, on the far side
// from the control points, are cut off first.
Polygon<double> warped_frame_region(const Homographyd& h, const FrameDims& dims, const RinkModel& model);

/// IOU of the estimated and ground-truth frame footprints on the rink model.
/// Returns 0 if the estimate misses the model; throws DegenerateQuad if the
/// ground-truth footprint has no area on the model.
double iou_part(const Homographyd& est, const Homographyd& gt, const FrameDims& dims, const RinkModel& model);

struct SmoothnessScore {
  std::array<double, 4> per_point{};
  double overall = 0;
};

/// Per coordinate: population std of the first differences over their mean
/// absolute value. A point scores 100 * (s_x + s_y) / 2; overall is the mean
/// over the four points. Lower is smoother.
SmoothnessScore smoothness(const Trajectory& traj);

struct SequenceMetrics {
  double iou_part_mean = 0;    // in [0, 1]
  ProjectionErrorStats proj;   // pooled over all frames and control points
  std::size_t frames = 0;
};

SequenceMetrics evaluate_sequence(std::span<const Homographyd> est, std::span<const Homographyd> gt,
                                  const FrameDims& dims, const RinkModel& model);

}  // namespace rinkloc
