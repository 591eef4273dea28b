#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rinkloc/rinkloc.hpp"

namespace rinkloc::app {

enum ExitCode : int { kOk = 0, kInvariant = 1, kInputError = 2 };

struct PipelineConfig {
  RinkModel model;
  FrameDims dims;
  SmoothingConfig smoothing;
  SbdConfig sbd;
  std::uint64_t seed = 42;
  double noise_sigma = 3.0;
  FrameDims render{128, 72};
  bool camera_affine = false;

  // Flat dotted keys, e.g. {"smoothing.window_size": 15}.
  nlohmann::json to_json() const;
  void apply(const nlohmann::json& flat);
  void validate() const;
};

// Reads a flat-dotted JSON object from disk.
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc);

struct Series {
  std::string label;
  std::string color;
  std::vector<double> xs;
  std::vector<double> ys;
  bool dashed = false;
};

// Standalone SVG line chart with the data embedded as polylines.
std::string line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series, bool invert_y = false);

// Coordinates-vs-frame charts for x and y plus the p1 path on the model.
void write_trajectory_plots(const std::filesystem::path& out_dir, const Trajectory& before, const Trajectory& after,
                            const RinkModel& model);

// Entry point for the command-line tool; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rinkloc::app
