#include "rinkloc/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "rinkloc/errors.hpp"

namespace rinkloc {

namespace {

constexpr double kStaticDiff = 1e-12;

double degenerate_area(const RinkModel& model) { return 1e-9 * model.width * model.height; }

}  // namespace

double squared_error(const Quadd& est, const Quadd& gt) {
  double total = 0;
  for (int i = 0; i < 4; ++i) total += (est[i] - gt[i]).squaredNorm();
  return total;
}

ProjectionErrorStats error_stats(std::span<const double> samples) {
  if (samples.empty()) throw InputError("no samples");
  ProjectionErrorStats s;
  const double n = double(samples.size());
  s.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double ss = 0;
  for (double v : samples) ss += (v - s.mean) * (v - s.mean);
  s.variance = ss / n;
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  s.median = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  return s;
}

std::array<double, 4> projection_distances(const Homographyd& est, const Homographyd& gt, const FrameDims& dims) {
  const Quadd cps = control_points(dims);
  const Quadd a = project(est, cps);
  const Quadd b = project(gt, cps);
  std::array<double, 4> d;
  for (int i = 0; i < 4; ++i) d[i] = (a[i] - b[i]).norm();
  return d;
}

ProjectionErrorStats projection_error(const Homographyd& est, const Homographyd& gt, const FrameDims& dims) {
  if (est == gt) return {};
  const auto d = projection_distances(est, gt, dims);
  return error_stats(d);
}

Polygon<double> warped_frame_region(const Homographyd& h, const FrameDims& dims, const RinkModel& model) {
  const auto& m = h.matrix();
  const auto depth = [&m](const Point2d& p) { return m(2, 0) * p.x() + m(2, 1) * p.y() + m(2, 2); };

  // The visible side of the horizon is the one holding the control points.
  const Quadd cps = control_points(dims);
  const Point2d centre = 0.25 * (cps[0] + cps[1] + cps[2] + cps[3]);
  const double ref = depth(centre);
  if (std::abs(ref) < GeometryTolerance<double>::kSingular) throw DegenerateQuad("control points map to infinity");
  const double sign = ref > 0 ? 1.0 : -1.0;
  const double floor = 1e-6 * std::abs(ref);

  const double w = dims.width, ht = dims.height;
  Polygon<double> frame = {{0, 0}, {0, ht}, {w, ht}, {w, 0}};
  frame = clip_half_plane(frame, sign * m(2, 0), sign * m(2, 1), sign * m(2, 2) - floor);
  if (frame.size() < 3) return {};
  Polygon<double> warped;
  warped.reserve(frame.size());
  for (const auto& p : frame) warped.push_back(project(h, p));
  return clip_polygon(counter_clockwise(warped), rectangle(0.0, 0.0, model.width, model.height));
}

double iou_part(const Homographyd& est, const Homographyd& gt, const FrameDims& dims, const RinkModel& model) {
  const Polygon<double> g = warped_frame_region(gt, dims, model);
  if (g.size() < 3 || area(g) < degenerate_area(model))
    throw DegenerateQuad("ground-truth frame region has no area on the model");
  if (est == gt) return 1.0;
  const Polygon<double> e = warped_frame_region(est, dims, model);
  if (e.size() < 3 || area(e) < degenerate_area(model)) return 0.0;
  return convex_iou(e, g);
}

SmoothnessScore smoothness(const Trajectory& traj) {
  if (traj.size() < 3) throw InputError("smoothness needs at least 3 frames");
  const std::size_t nd = traj.size() - 1;
  std::array<std::array<double, 2>, 4> scores{};
  int static_series = 0;
  for (int p = 0; p < 4; ++p)
    for (int c = 0; c < 2; ++c) {
      const auto s = traj.series(p, c);
      std::vector<double> diff(nd);
      for (std::size_t i = 0; i < nd; ++i) diff[i] = s[i + 1] - s[i];
      double mean = 0, mean_abs = 0;
      for (double d : diff) {
        mean += d;
        mean_abs += std::abs(d);
      }
      mean /= double(nd);
      mean_abs /= double(nd);
      if (mean_abs < kStaticDiff) {
        ++static_series;
        continue;
      }
      double ss = 0;
      for (double d : diff) ss += (d - mean) * (d - mean);
      scores[p][c] = std::sqrt(ss / double(nd)) / mean_abs;
    }
  SmoothnessScore out;
  if (static_series == 8) return out;
  if (static_series > 0) throw StaticTrajectory("trajectory mixes static and moving coordinate series");
  for (int p = 0; p < 4; ++p) out.per_point[p] = 100.0 * (scores[p][0] + scores[p][1]) / 2.0;
  out.overall = (out.per_point[0] + out.per_point[1] + out.per_point[2] + out.per_point[3]) / 4.0;
  return out;
}

SequenceMetrics evaluate_sequence(std::span<const Homographyd> est, std::span<const Homographyd> gt,
                                  const FrameDims& dims, const RinkModel& model) {
  if (est.size() != gt.size()) throw InputError("estimate and ground truth differ in frame count");
  if (est.empty()) throw InputError("no frames to evaluate");
  SequenceMetrics out;
  out.frames = est.size();
  std::vector<double> distances;
  distances.reserve(est.size() * 4);
  double iou_sum = 0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    iou_sum += iou_part(est[i], gt[i], dims, model);
    if (est[i] == gt[i]) {
      distances.insert(distances.end(), 4, 0.0);
    } else {
      const auto d = projection_distances(est[i], gt[i], dims);
      distances.insert(distances.end(), d.begin(), d.end());
    }
  }
  out.iou_part_mean = iou_sum / double(est.size());
  out.proj = error_stats(distances);
  return out;
}

}  // namespace rinkloc
