#include "rinkloc/simulator.hpp"

#include <algorithm>
#include <iomanip>
#include <random>
#include <sstream>

#include "rinkloc/errors.hpp"

namespace rinkloc {

namespace {

// All four frame corners on the same side of the horizon.
bool frame_in_front(const Homographyd& h, const FrameDims& dims) {
  const auto& m = h.matrix();
  const double xs[4] = {0, double(dims.width), double(dims.width), 0};
  const double ys[4] = {0, 0, double(dims.height), double(dims.height)};
  int positive = 0;
  for (int i = 0; i < 4; ++i) {
    const double w = m(2, 0) * xs[i] + m(2, 1) * ys[i] + m(2, 2);
    if (std::abs(w) < 1e-9) return false;
    positive += w > 0;
  }
  return positive == 0 || positive == 4;
}

Homographyd model_pan_zoom(double cx, double cy, double dx, double dy, double s) {
  Eigen::Matrix3d a;
  a << s, 0, cx + dx - s * cx, 0, s, cy + dy - s * cy, 0, 0, 1;
  return Homographyd(a);
}

Image draw_scene(std::mt19937_64& rng, const SyntheticVideoSpec& spec) {
  Image img(spec.dims.width, spec.dims.height, 3);
  if (spec.texture == Texture::FlatColor) {
    std::uniform_int_distribution<int> channel(0, 255);
    const int rgb[3] = {channel(rng), channel(rng), channel(rng)};
    for (std::size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = std::uint8_t(rgb[i % 3]);
  } else {
    std::uniform_int_distribution<int> base(8, 247);
    std::uniform_int_distribution<int> jitter(-6, 6);
    const int rgb[3] = {base(rng), base(rng), base(rng)};
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
      img.pixels[i] = std::uint8_t(std::clamp(rgb[i % 3] + jitter(rng), 0, 255));
  }
  return img;
}

}  // namespace

void CameraPath::validate() const {
  if (keyframes.empty()) throw InputError("camera path needs at least one keyframe");
  for (std::size_t i = 1; i < keyframes.size(); ++i)
    if (keyframes[i].frame <= keyframes[i - 1].frame) throw InputError("keyframe indices must be strictly increasing");
}

Homographyd camera_homography_at(const CameraPath& path, std::int64_t frame) {
  path.validate();
  const auto& kf = path.keyframes;
  if (frame <= kf.front().frame) return kf.front().h;
  if (frame >= kf.back().frame) return kf.back().h;
  const auto upper = std::upper_bound(kf.begin(), kf.end(), frame,
                                      [](std::int64_t f, const Keyframe& k) { return f < k.frame; });
  const Keyframe& a = *(upper - 1);
  const Keyframe& b = *upper;
  if (frame == a.frame || path.interpolation == Interpolation::PiecewiseConstant) return a.h;
  const double t = double(frame - a.frame) / double(b.frame - a.frame);
  const Eigen::Matrix3d m = (1.0 - t) * a.h.unit_corner() + t * b.h.unit_corner();
  try {
    return Homographyd(m);
  } catch (const NumericalFailure&) {
    throw IllConditioned("interpolated homography is singular at frame " + std::to_string(frame));
  }
}

std::vector<Homographyd> camera_homographies(const CameraPath& path, std::int64_t n_frames) {
  if (n_frames < 1) throw InputError("need at least one frame");
  std::vector<Homographyd> out;
  out.reserve(std::size_t(n_frames));
  for (std::int64_t f = 0; f < n_frames; ++f) out.push_back(camera_homography_at(path, f));
  return out;
}

Trajectory ground_truth_trajectory(const CameraPath& path, const FrameDims& dims, std::int64_t n_frames) {
  return trajectory_from_homographies(camera_homographies(path, n_frames), dims);
}

Homographyd view_homography(const BroadcastView& v, const FrameDims& dims) {
  const double far_half = v.spread * v.half_width;
  const Quadd model = {Point2d(v.cx - far_half, v.cy - v.depth / 2), Point2d(v.cx - v.half_width, v.cy + v.depth / 2),
                       Point2d(v.cx + v.half_width, v.cy + v.depth / 2), Point2d(v.cx + far_half, v.cy - v.depth / 2)};
  return dlt_homography(control_points(dims), model);
}

CameraPath random_broadcast_path(std::uint64_t seed, const FrameDims& dims, const RinkModel& model,
                                 std::int64_t n_frames, bool affine_in_time) {
  if (n_frames < 1) throw InputError("need at least one frame");
  std::mt19937_64 rng(seed);
  const auto uniform = [&rng](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  const auto draw_view = [&] {
    BroadcastView v;
    v.cx = model.width * uniform(0.35, 0.65);
    v.cy = model.height * uniform(0.45, 0.6);
    v.half_width = model.width * uniform(0.1, 0.15);
    v.spread = uniform(1.15, 1.35);
    v.depth = model.height * uniform(0.15, 0.22);
    return v;
  };

  const auto signed_uniform = [&](double lo, double hi) { return (rng() & 1 ? 1.0 : -1.0) * uniform(lo, hi); };

  for (int attempt = 0; attempt < 1000; ++attempt) {
    const BroadcastView start = draw_view();
    const Homographyd h0 = view_homography(start, dims);
    // The pan dominates the zoom so no control point stalls along either axis.
    const Homographyd pan = model_pan_zoom(start.cx, start.cy, model.width * signed_uniform(0.05, 0.15),
                                           model.height * signed_uniform(0.02, 0.05), uniform(0.95, 1.05));
    Homographyd h1;
    if (affine_in_time) {
      h1 = pan * h0;
    } else {
      BroadcastView end = start;
      end.half_width *= uniform(0.99, 1.01);
      end.spread *= uniform(0.99, 1.01);
      end.depth *= uniform(0.99, 1.01);
      h1 = pan * view_homography(end, dims);
    }
    CameraPath path;
    path.keyframes.push_back({0, h0});
    if (n_frames > 1) path.keyframes.push_back({n_frames - 1, h1});
    bool ok = true;
    for (std::int64_t f : {std::int64_t(0), n_frames / 2, n_frames - 1}) {
      try {
        ok = ok && frame_in_front(camera_homography_at(path, f), dims);
      } catch (const Error&) {
        ok = false;
      }
    }
    if (ok) return path;
  }
  throw IllConditioned("could not draw a well-conditioned camera path");
}

void SyntheticVideoSpec::validate() const {
  if (n_frames < 1) throw InputError("synthetic video needs at least one frame");
  if (dims.width < kBlockGrid || dims.height < kBlockGrid) throw InputError("synthetic frames must be at least 4x4");
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    if (cuts[i] <= 0 || cuts[i] >= n_frames) throw InputError("cuts must lie in (0, n_frames)");
    if (i > 0 && cuts[i] <= cuts[i - 1]) throw InputError("cuts must be strictly increasing");
  }
  if (scene_seeds.size() != cuts.size() + 1) throw InputError("need one scene seed per shot");
}

SyntheticVideo::SyntheticVideo(SyntheticVideoSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  std::optional<BlockHistogram> previous;
  for (std::uint64_t seed : spec_.scene_seeds) {
    std::mt19937_64 rng(seed);
    for (int attempt = 0;; ++attempt) {
      if (attempt == 1000) throw Error("could not draw a contrasting scene");
      Image scene = draw_scene(rng, spec_);
      BlockHistogram hist = block_histogram(scene, spec_.check_bins);
      if (!previous || hist_distance(*previous, hist) > 0.5) {
        previous = std::move(hist);
        scenes_.push_back(std::move(scene));
        break;
      }
    }
  }
}

std::size_t SyntheticVideo::shot_of(std::int64_t frame) const {
  if (frame < 0 || frame >= spec_.n_frames) throw InputError("frame index out of range");
  return std::size_t(std::upper_bound(spec_.cuts.begin(), spec_.cuts.end(), frame) - spec_.cuts.begin());
}

std::optional<Image> SyntheticFrameSource::next() {
  if (pos_ >= video_.spec().n_frames) return std::nullopt;
  return video_.frame(pos_++);
}

std::vector<std::filesystem::path> render_synthetic_video(const SyntheticVideoSpec& spec,
                                                          const std::filesystem::path& out_dir) {
  const SyntheticVideo video(spec);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  const int digits = std::max<int>(6, int(std::to_string(spec.n_frames - 1).size()));
  std::vector<std::filesystem::path> files;
  files.reserve(std::size_t(spec.n_frames));
  for (std::int64_t f = 0; f < spec.n_frames; ++f) {
    std::ostringstream name;
    name << "frame_" << std::setw(digits) << std::setfill('0') << f << ".ppm";
    const auto path = out_dir / name.str();
    write_pnm(path, video.frame(f));
    files.push_back(path);
  }
  return files;
}

}  // namespace rinkloc
