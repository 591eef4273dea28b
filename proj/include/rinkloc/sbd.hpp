#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rinkloc/image.hpp"

namespace rinkloc {

// Cut detection over a hierarchical partition of the frame stream:
// segments of seg_len frames (1-frame overlap) form groups, groups (1-frame
// overlap) form mega-groups, and neighbouring mega-groups share one segment.
struct SbdConfig {
  int bins = 16;
  int seg_len = 21;
  int segments_per_group = 10;
  int groups_per_mega_group = 9;
  bool dedup = true;

  // Derived spans in frames.
  std::int64_t group_span() const { return std::int64_t(segments_per_group) * (seg_len - 1) + 1; }
  std::int64_t mega_group_span() const { return std::int64_t(groups_per_mega_group) * (group_span() - 1) + 1; }
  std::int64_t mega_group_stride() const { return mega_group_span() - seg_len; }

  void validate() const;
};

inline constexpr int kBlockGrid = 4;
inline constexpr int kBlocks = kBlockGrid * kBlockGrid;

/// Per-block, per-channel normalized colour histograms over a 4x4 grid.
class BlockHistogram {
 public:
  BlockHistogram(int channels, int bins);

  int channels() const { return channels_; }
  int bins() const { return bins_; }

  std::span<double> channel(int block, int c) {
    return {values_.data() + (std::size_t(block) * channels_ + c) * bins_, std::size_t(bins_)};
  }
  std::span<const double> channel(int block, int c) const {
    return {values_.data() + (std::size_t(block) * channels_ + c) * bins_, std::size_t(bins_)};
  }
  // All channels of one block, concatenated.
  std::span<const double> block(int b) const {
    return {values_.data() + std::size_t(b) * channels_ * bins_, std::size_t(channels_) * bins_};
  }

 private:
  int channels_;
  int bins_;
  std::vector<double> values_;
};

BlockHistogram block_histogram(const Image& frame, int bins = 16);

// Mean over the 16 blocks of half the L1 distance between the blocks'
// concatenated histograms, divided by the channel count. In [0, 1].
double hist_distance(const BlockHistogram& a, const BlockHistogram& b);

struct Segment {
  std::int64_t begin = 0;  // first frame
  std::int64_t end = 0;    // one past the last frame
  std::int64_t size() const { return end - begin; }
  bool operator==(const Segment&) const = default;
};

struct Group {
  std::vector<Segment> segments;
  std::int64_t begin() const { return segments.front().begin; }
  std::int64_t end() const { return segments.back().end; }
};

struct MegaGroup {
  std::vector<Group> groups;
  std::int64_t begin() const { return groups.front().begin(); }
  std::int64_t end() const { return groups.back().end(); }
  std::size_t segment_count() const;
};

struct Partition {
  std::int64_t num_frames = 0;
  std::vector<MegaGroup> mega_groups;
};

// Mega-group starting at `start`, truncated at `num_frames`.
MegaGroup mega_group_at(std::int64_t start, std::int64_t num_frames, const SbdConfig& config = {});
Partition build_partition(std::int64_t num_frames, const SbdConfig& config = {});

struct PartitionStats {
  double mu_g = 0;      // mean segment marginal distance in the group
  double sigma_g = 0;   // population std of the same
  double mu_mg = 0;     // mean segment marginal distance in the mega-group
  double mu_sg = 0;     // mean successive-frame distance in the segment
  double sigma_sg = 0;  // population std of the same
  std::vector<double> dist_sg;
};

// Below this, a mean or std is treated as zero (static content, no cut).
inline constexpr double kStaticEpsilon = 1e-9;

double group_threshold(const PartitionStats& stats);

// Index into dist_sg of the boundary pair, if the segment holds a cut.
// The boundary frame is the second frame of that pair.
std::optional<std::size_t> refine_candidate(const PartitionStats& stats);

class FrameSource {
 public:
  virtual ~FrameSource() = default;
  // Next frame in stream order, or nullopt at the end.
  virtual std::optional<Image> next() = 0;
};

// Image files (.ppm/.pgm/.pnm) of a directory in lexicographic order.
class DirectoryFrameSource : public FrameSource {
 public:
  explicit DirectoryFrameSource(const std::filesystem::path& dir);
  // From an explicit list of paths (e.g. a list file).
  explicit DirectoryFrameSource(std::vector<std::filesystem::path> files);
  static DirectoryFrameSource from_list_file(const std::filesystem::path& list);

  std::optional<Image> next() override;
  std::size_t size() const { return files_.size(); }

 private:
  std::vector<std::filesystem::path> files_;
  std::size_t pos_ = 0;
};

/// Streaming detector. Frames are pushed in order; histograms of at most one
/// mega-group plus one group are kept alive, raw frames never.
class ShotDetector {
 public:
  explicit ShotDetector(SbdConfig config = {});

  void push(const Image& frame);
  void push(BlockHistogram hist);
  // Flushes the trailing mega-group and returns the boundary list.
  std::vector<std::int64_t> finish();

  std::int64_t frames_seen() const { return count_; }
  std::size_t buffered() const { return buffer_.size(); }

 private:
  void process(const MegaGroup& mg);
  void anchor_tail(MegaGroup& mg) const;
  const BlockHistogram& hist(std::int64_t frame) const { return buffer_[std::size_t(frame - buffer_start_)]; }

  SbdConfig config_;
  std::deque<BlockHistogram> buffer_;
  std::int64_t buffer_start_ = 0;
  std::int64_t count_ = 0;
  std::int64_t mg_start_ = 0;
  std::int64_t last_end_ = 0;
  bool processed_any_ = false;
  std::vector<std::int64_t> raw_;
};

std::vector<std::int64_t> detect_shots(FrameSource& frames, const SbdConfig& config = {});

// Sorts and merges boundaries closer than 2 frames, keeping the smaller.
std::vector<std::int64_t> dedup_boundaries(std::vector<std::int64_t> boundaries);

// Half-open [start, end) shot ranges covering [0, num_frames).
std::vector<std::pair<std::int64_t, std::int64_t>> shots_from_boundaries(std::span<const std::int64_t> boundaries,
                                                                         std::int64_t num_frames);

}  // namespace rinkloc
