#pragma once

#include <cstdint>
#include <vector>

#include "rinkloc/geometry.hpp"

namespace rinkloc {

/// Per-frame rink-model positions of the four control points over a run of
/// contiguous frames starting at `first_frame`.
struct Trajectory {
  std::int64_t first_frame = 0;
  std::vector<Quadd> points;

  Trajectory() = default;
  Trajectory(std::int64_t first, std::vector<Quadd> pts) : first_frame(first), points(std::move(pts)) {}

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  std::int64_t frame_index(std::size_t i) const { return first_frame + std::int64_t(i); }
  std::int64_t end_frame() const { return first_frame + std::int64_t(points.size()); }

  // Coordinate `coord` (0 = x, 1 = y) of control point `point` over time.
  std::vector<double> series(int point, int coord) const {
    std::vector<double> s(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) s[i] = points[i][point](coord);
    return s;
  }

  // Frames [begin, end) in absolute frame indices.
  Trajectory slice(std::int64_t begin, std::int64_t end) const {
    if (begin < first_frame || end > end_frame() || begin > end) throw InputError("trajectory slice out of range");
    return Trajectory(begin, std::vector<Quadd>(points.begin() + (begin - first_frame), points.begin() + (end - first_frame)));
  }

  bool all_finite() const {
    for (const auto& q : points)
      for (const auto& p : q)
        if (!p.allFinite()) return false;
    return true;
  }
};

// Projections of the frame control points under each homography.
inline Trajectory trajectory_from_homographies(const std::vector<Homographyd>& hs, const FrameDims& dims,
                                               std::int64_t first_frame = 0) {
  const Quadd cps = control_points(dims);
  Trajectory t;
  t.first_frame = first_frame;
  t.points.reserve(hs.size());
  for (const auto& h : hs) t.points.push_back(project(h, cps));
  return t;
}

// Per-frame DLT from the frame control points onto the trajectory; no smoothing.
inline std::vector<Homographyd> homographies_from_trajectory(const Trajectory& traj, const FrameDims& dims) {
  const Quadd cps = control_points(dims);
  std::vector<Homographyd> out;
  out.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    try {
      out.push_back(dlt_homography(cps, traj.points[i]));
    } catch (const DegenerateConfiguration& e) {
      throw DegenerateConfiguration(e.what(), traj.frame_index(i));
    }
  }
  return out;
}

}  // namespace rinkloc
