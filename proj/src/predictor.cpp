#include "rinkloc/predictor.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "rinkloc/errors.hpp"

namespace rinkloc {

namespace {

constexpr const char* kHeader = "frame,x1,y1,x2,y2,x3,y3,x4,y4";

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view text, std::size_t line, const char* what) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ParseError(std::string("malformed ") + what + " '" + std::string(text) + "'", line);
  return value;
}

}  // namespace

Trajectory parse_trajectory_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  Trajectory traj;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    if (!header_seen) {
      if (row != kHeader) throw ParseError(std::string("expected header '") + kHeader + "'", line_no);
      header_seen = true;
      continue;
    }
    const auto fields = split_fields(row);
    if (fields.size() != 9) throw ParseError("expected 9 fields, got " + std::to_string(fields.size()), line_no);
    const auto frame = parse_number<std::int64_t>(fields[0], line_no, "frame index");
    Quadd q;
    for (int i = 0; i < 8; ++i) {
      const double v = parse_number<double>(fields[std::size_t(i) + 1], line_no, "coordinate");
      if (!std::isfinite(v)) throw NonFinitePoint("non-finite coordinate", line_no);
      q[std::size_t(i / 2)](i % 2) = v;
    }
    if (traj.empty()) {
      if (frame < 0) throw ParseError("negative frame index", line_no);
      traj.first_frame = frame;
    } else if (frame != traj.end_frame()) {
      throw NonContiguousFrames("expected frame " + std::to_string(traj.end_frame()) + ", got " + std::to_string(frame),
                                line_no);
    }
    traj.points.push_back(q);
  }
  if (!header_seen) throw ParseError("missing header", line_no + 1);
  if (traj.empty()) throw ParseError("trajectory has no rows", line_no + 1);
  return traj;
}

Trajectory load_predictions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_trajectory_csv(in);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << kHeader << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out << traj.frame_index(i);
    for (const auto& p : traj.points[i]) out << ',' << p.x() << ',' << p.y();
    out << '\n';
  }
}

void save_trajectory(const std::filesystem::path& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_trajectory_csv(out, traj);
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<IndexedHomography> load_homographies(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  if (!doc.contains("frames") || !doc["frames"].is_array()) throw InputError(path.string() + ": missing 'frames' array");
  std::vector<IndexedHomography> out;
  for (const auto& f : doc["frames"]) {
    try {
      const auto values = f.at("H").get<std::vector<double>>();
      out.push_back({f.at("index").get<std::int64_t>(), Homographyd::from_row_major(values)});
    } catch (const nlohmann::json::exception& e) {
      throw InputError(path.string() + ": " + e.what());
    }
  }
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i].index != out[i - 1].index + 1) throw InputError(path.string() + ": frame indices are not contiguous");
  return out;
}

void save_homographies(const std::filesystem::path& path, const std::vector<Homographyd>& hs,
                       std::int64_t first_frame) {
  nlohmann::json frames = nlohmann::json::array();
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const auto rm = hs[i].row_major();
    frames.push_back({{"index", first_frame + std::int64_t(i)}, {"H", std::vector<double>(rm.begin(), rm.end())}});
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << nlohmann::json{{"frames", frames}}.dump(1) << '\n';
}

Trajectory add_gaussian_noise(const Trajectory& traj, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0)) throw InputError("noise sigma must be non-negative");
  Trajectory out = traj;
  if (sigma == 0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  for (auto& quad : out.points)
    for (auto& p : quad) {
      p.x() += noise(rng);
      p.y() += noise(rng);
    }
  return out;
}

SyntheticPredictions synthetic_predictions(const SyntheticOracle& source, const FrameDims& dims,
                                           std::int64_t n_frames) {
  SyntheticPredictions out;
  out.ground_truth = camera_homographies(source.path, n_frames);
  out.predictions = add_gaussian_noise(trajectory_from_homographies(out.ground_truth, dims), source.sigma, source.seed);
  return out;
}

Trajectory predict(const PredictionSource& source, const FrameDims& dims, std::int64_t n_frames) {
  if (const auto* file = std::get_if<FileBacked>(&source)) return load_predictions(file->path);
  return synthetic_predictions(std::get<SyntheticOracle>(source), dims, n_frames).predictions;
}

}  // namespace rinkloc
