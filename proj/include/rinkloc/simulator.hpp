#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "rinkloc/geometry.hpp"
#include "rinkloc/image.hpp"
#include "rinkloc/sbd.hpp"
#include "rinkloc/trajectory.hpp"

namespace rinkloc {

enum class Interpolation { Linear, PiecewiseConstant };

struct Keyframe {
  std::int64_t frame = 0;
  Homographyd h;
};

/// Ground-truth broadcast camera: frame -> rink-model homographies at
/// keyframes, interpolated in between and clamped outside.
struct CameraPath {
  std::vector<Keyframe> keyframes;
  Interpolation interpolation = Interpolation::Linear;

  void validate() const;
};

// Linear mode interpolates the eight entries of the (2,2)-normalized matrices,
// which is exact for translation and scale paths.
Homographyd camera_homography_at(const CameraPath& path, std::int64_t frame);
std::vector<Homographyd> camera_homographies(const CameraPath& path, std::int64_t n_frames);

Trajectory ground_truth_trajectory(const CameraPath& path, const FrameDims& dims, std::int64_t n_frames);

// Frame -> model homography of a view whose control points land on a
// trapezoid centred at (cx, cy): near edge half-width `half_width`, far edge
// `spread` times wider, `depth` model px between the two edges.
struct BroadcastView {
  double cx = 200, cy = 85;
  double half_width = 50;
  double spread = 1.3;
  double depth = 30;
};
Homographyd view_homography(const BroadcastView& view, const FrameDims& dims);

/// Seeded two-keyframe path over [0, n_frames). The end view is a model-space
/// pan/zoom of the start view; with `affine_in_time` that is all, so every
/// control point moves affinely in time. Otherwise the end view also changes
/// its trapezoid shape by up to 1%.
CameraPath random_broadcast_path(std::uint64_t seed, const FrameDims& dims, const RinkModel& model,
                                 std::int64_t n_frames, bool affine_in_time = false);

enum class Texture { FlatColor, NoisePattern };

struct SyntheticVideoSpec {
  std::int64_t n_frames = 0;
  FrameDims dims{64, 36};
  std::vector<std::int64_t> cuts;
  std::vector<std::uint64_t> scene_seeds;  // one per shot
  Texture texture = Texture::FlatColor;
  int check_bins = 16;  // histogram bins used by the cut-contrast guarantee

  void validate() const;
};

/// In-memory renderer. Each shot is a single still scene drawn from its seed;
/// a scene is redrawn until its block-histogram distance to the previous shot
/// exceeds 0.5.
class SyntheticVideo {
 public:
  explicit SyntheticVideo(SyntheticVideoSpec spec);

  const SyntheticVideoSpec& spec() const { return spec_; }
  std::size_t shot_of(std::int64_t frame) const;
  const Image& frame(std::int64_t index) const { return scenes_[shot_of(index)]; }
  const Image& scene(std::size_t shot) const { return scenes_[shot]; }

 private:
  SyntheticVideoSpec spec_;
  std::vector<Image> scenes_;
};

class SyntheticFrameSource : public FrameSource {
 public:
  explicit SyntheticFrameSource(const SyntheticVideo& video) : video_(video) {}
  std::optional<Image> next() override;

 private:
  const SyntheticVideo& video_;
  std::int64_t pos_ = 0;
};

// Writes frame_000000.ppm ... into out_dir and returns the paths in order.
std::vector<std::filesystem::path> render_synthetic_video(const SyntheticVideoSpec& spec,
                                                          const std::filesystem::path& out_dir);

}  // namespace rinkloc
