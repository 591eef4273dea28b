#include "rinkloc/sbd.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

#include "rinkloc/errors.hpp"

namespace rinkloc {

namespace {

struct MeanStd {
  double mean = 0;
  double std = 0;
};

MeanStd population_stats(std::span<const double> v) {
  MeanStd out;
  if (v.empty()) return out;
  out.mean = std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
  double ss = 0;
  for (double x : v) ss += (x - out.mean) * (x - out.mean);
  out.std = std::sqrt(ss / double(v.size()));
  return out;
}

bool is_frame_file(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  return ext == ".ppm" || ext == ".pgm" || ext == ".pnm";
}

}  // namespace

void SbdConfig::validate() const {
  if (bins < 1 || bins > 256) throw InputError("bins must be in [1, 256]");
  if (seg_len < 2) throw InputError("segment length must be at least 2");
  if (segments_per_group < 1 || groups_per_mega_group < 1) throw InputError("partition counts must be positive");
  if (mega_group_stride() < 1) throw InputError("mega-group must be longer than one segment");
}

std::size_t MegaGroup::segment_count() const {
  std::size_t n = 0;
  for (const auto& g : groups) n += g.segments.size();
  return n;
}

BlockHistogram::BlockHistogram(int channels, int bins)
    : channels_(channels), bins_(bins), values_(std::size_t(kBlocks) * channels * bins, 0.0) {}

BlockHistogram block_histogram(const Image& frame, int bins) {
  if (frame.width < kBlockGrid || frame.height < kBlockGrid) throw ImageTooSmall("frame must be at least 4x4");
  if (bins < 1 || bins > 256) throw InputError("bins must be in [1, 256]");
  BlockHistogram hist(frame.channels, bins);
  const int bw = frame.width / kBlockGrid;
  const int bh = frame.height / kBlockGrid;
  for (int by = 0; by < kBlockGrid; ++by) {
    const int y0 = by * bh;
    const int y1 = by == kBlockGrid - 1 ? frame.height : y0 + bh;
    for (int bx = 0; bx < kBlockGrid; ++bx) {
      const int x0 = bx * bw;
      const int x1 = bx == kBlockGrid - 1 ? frame.width : x0 + bw;
      const int block = by * kBlockGrid + bx;
      for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x)
          for (int c = 0; c < frame.channels; ++c) hist.channel(block, c)[frame.at(x, y, c) * bins / 256] += 1.0;
      const double count = double(x1 - x0) * double(y1 - y0);
      for (int c = 0; c < frame.channels; ++c)
        for (double& v : hist.channel(block, c)) v /= count;
    }
  }
  return hist;
}

double hist_distance(const BlockHistogram& a, const BlockHistogram& b) {
  if (a.channels() != b.channels() || a.bins() != b.bins()) throw ShapeMismatch("block histograms differ in shape");
  double total = 0;
  for (int blk = 0; blk < kBlocks; ++blk) {
    const auto ha = a.block(blk);
    const auto hb = b.block(blk);
    double l1 = 0;
    for (std::size_t i = 0; i < ha.size(); ++i) l1 += std::abs(ha[i] - hb[i]);
    total += 0.5 * l1 / a.channels();
  }
  return total / kBlocks;
}

MegaGroup mega_group_at(std::int64_t start, std::int64_t num_frames, const SbdConfig& config) {
  MegaGroup mg;
  const std::int64_t seg_step = config.seg_len - 1;
  const std::int64_t group_step = config.group_span() - 1;
  for (int g = 0; g < config.groups_per_mega_group; ++g) {
    const std::int64_t gs = start + g * group_step;
    if (g > 0 && num_frames <= mg.groups.back().end()) break;
    Group group;
    for (int s = 0; s < config.segments_per_group; ++s) {
      const std::int64_t ss = gs + s * seg_step;
      if (s > 0 && num_frames <= group.segments.back().end) break;
      group.segments.push_back({ss, std::min<std::int64_t>(ss + config.seg_len, num_frames)});
    }
    mg.groups.push_back(std::move(group));
  }
  return mg;
}

Partition build_partition(std::int64_t num_frames, const SbdConfig& config) {
  config.validate();
  if (num_frames < 2) throw InputError("need at least 2 frames");
  Partition p;
  p.num_frames = num_frames;
  for (std::int64_t start = 0;; start += config.mega_group_stride()) {
    p.mega_groups.push_back(mega_group_at(start, num_frames, config));
    if (num_frames <= start + config.mega_group_span()) break;
  }
  return p;
}

double group_threshold(const PartitionStats& s) {
  if (!(s.mu_g > 0) || !(s.mu_mg > 0)) throw InvalidStats("group threshold needs positive mu_G and mu_MG");
  return 0.5 * s.mu_g + 0.5 * (1.0 + std::log(s.mu_mg / s.mu_g) * s.sigma_g);
}

std::optional<std::size_t> refine_candidate(const PartitionStats& s) {
  if (!(s.mu_g > 0) || !(s.mu_sg > 0) || !(s.sigma_sg > 0))
    throw InvalidStats("refinement needs positive mu_G, mu_Sg and sigma_Sg");
  if (s.dist_sg.empty()) throw InvalidStats("refinement needs successive-frame distances");
  const auto it = std::max_element(s.dist_sg.begin(), s.dist_sg.end());
  // A negative right-hand side (mu_Sg * sigma_Sg > mu_G) always passes.
  if (*it / s.mu_g > std::log(s.mu_g / (s.mu_sg * s.sigma_sg))) return std::size_t(it - s.dist_sg.begin());
  return std::nullopt;
}

DirectoryFrameSource::DirectoryFrameSource(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && is_frame_file(entry.path())) files_.push_back(entry.path());
  std::sort(files_.begin(), files_.end());
}

DirectoryFrameSource::DirectoryFrameSource(std::vector<std::filesystem::path> files) : files_(std::move(files)) {}

DirectoryFrameSource DirectoryFrameSource::from_list_file(const std::filesystem::path& list) {
  std::ifstream in(list);
  if (!in) throw IoError("cannot open " + list.string());
  std::vector<std::filesystem::path> files;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::filesystem::path p(line);
    files.push_back(p.is_relative() ? list.parent_path() / p : p);
  }
  return DirectoryFrameSource(std::move(files));
}

std::optional<Image> DirectoryFrameSource::next() {
  if (pos_ >= files_.size()) return std::nullopt;
  const std::size_t index = pos_++;
  try {
    return read_pnm(files_[index]);
  } catch (const Error& e) {
    throw DecodeError(std::string(e.what()) + " [" + files_[index].string() + "]", std::int64_t(index));
  }
}

ShotDetector::ShotDetector(SbdConfig config) : config_(config) { config_.validate(); }

void ShotDetector::push(const Image& frame) {
  try {
    push(block_histogram(frame, config_.bins));
  } catch (const ImageTooSmall& e) {
    throw DecodeError(e.what(), count_);
  }
}

void ShotDetector::push(BlockHistogram h) {
  buffer_.push_back(std::move(h));
  ++count_;
  const std::int64_t full_end = mg_start_ + config_.mega_group_span();
  if (count_ == full_end) {
    process(mega_group_at(mg_start_, full_end, config_));
    processed_any_ = true;
    last_end_ = full_end;
    mg_start_ += config_.mega_group_stride();
    // Keep one group behind the next mega-group so a short tail can be re-anchored.
    while (buffer_start_ < mg_start_ - (config_.group_span() - 1)) {
      buffer_.pop_front();
      ++buffer_start_;
    }
  }
}

std::vector<std::int64_t> ShotDetector::finish() {
  if (count_ < 2) throw InputError("need at least 2 frames");
  if (!processed_any_ || count_ > last_end_) {
    MegaGroup mg = mega_group_at(mg_start_, count_, config_);
    anchor_tail(mg);
    process(mg);
  }
  processed_any_ = true;
  last_end_ = count_;
  auto out = raw_;
  if (config_.dedup) return dedup_boundaries(std::move(out));
  std::sort(out.begin(), out.end());
  return out;
}

// A truncated final group has too few segments for the refinement test to
// ever fire, so it is replaced by a full group ending at the last frame.
void ShotDetector::anchor_tail(MegaGroup& mg) const {
  Group& last = mg.groups.back();
  const std::int64_t span = config_.group_span();
  if (std::int64_t(last.segments.size()) == config_.segments_per_group || count_ < span) return;
  const std::int64_t start = std::max(count_ - span, buffer_start_);
  Group anchored;
  for (std::int64_t s = start; s + 1 < count_; s += config_.seg_len - 1)
    anchored.segments.push_back({s, std::min<std::int64_t>(s + config_.seg_len, count_)});
  last = std::move(anchored);
}

void ShotDetector::process(const MegaGroup& mg) {
  std::vector<std::vector<double>> marginal(mg.groups.size());
  std::vector<double> all;
  for (std::size_t g = 0; g < mg.groups.size(); ++g)
    for (const auto& seg : mg.groups[g].segments) {
      const double d = hist_distance(hist(seg.begin), hist(seg.end - 1));
      marginal[g].push_back(d);
      all.push_back(d);
    }
  const double mu_mg = population_stats(all).mean;

  for (std::size_t g = 0; g < mg.groups.size(); ++g) {
    const MeanStd gs = population_stats(marginal[g]);
    if (gs.mean < kStaticEpsilon) continue;
    PartitionStats stats;
    stats.mu_g = gs.mean;
    stats.sigma_g = gs.std;
    stats.mu_mg = mu_mg;
    const double threshold = group_threshold(stats);
    const auto& segments = mg.groups[g].segments;
    for (std::size_t s = 0; s < segments.size(); ++s) {
      if (!(marginal[g][s] > threshold)) continue;
      const Segment& seg = segments[s];
      stats.dist_sg.clear();
      for (std::int64_t f = seg.begin; f + 1 < seg.end; ++f) stats.dist_sg.push_back(hist_distance(hist(f), hist(f + 1)));
      const MeanStd ss = population_stats(stats.dist_sg);
      if (ss.mean < kStaticEpsilon || ss.std < kStaticEpsilon) continue;
      stats.mu_sg = ss.mean;
      stats.sigma_sg = ss.std;
      if (const auto idx = refine_candidate(stats)) raw_.push_back(seg.begin + std::int64_t(*idx) + 1);
    }
  }
}

std::vector<std::int64_t> detect_shots(FrameSource& frames, const SbdConfig& config) {
  ShotDetector detector(config);
  while (auto frame = frames.next()) detector.push(*frame);
  return detector.finish();
}

std::vector<std::int64_t> dedup_boundaries(std::vector<std::int64_t> b) {
  std::sort(b.begin(), b.end());
  std::vector<std::int64_t> out;
  for (std::int64_t f : b)
    if (out.empty() || f - out.back() > 1) out.push_back(f);
  return out;
}

std::vector<std::pair<std::int64_t, std::int64_t>> shots_from_boundaries(std::span<const std::int64_t> boundaries,
                                                                         std::int64_t num_frames) {
  std::vector<std::pair<std::int64_t, std::int64_t>> shots;
  std::int64_t start = 0;
  for (std::int64_t b : boundaries) {
    if (b <= start || b >= num_frames) throw InputError("boundaries must be increasing and inside the video");
    shots.emplace_back(start, b);
    start = b;
  }
  if (num_frames > start) shots.emplace_back(start, num_frames);
  return shots;
}

}  // namespace rinkloc
