#include <fstream>

#include "app.hpp"

namespace rinkloc::app {

namespace {

const char* edge_name(EdgePolicy e) { return e == EdgePolicy::Reflect ? "reflect" : "shrink"; }

EdgePolicy parse_edge(const std::string& s) {
  if (s == "reflect") return EdgePolicy::Reflect;
  if (s == "shrink") return EdgePolicy::Shrink;
  throw InputError("smoothing.edge must be 'reflect' or 'shrink', got '" + s + "'");
}

}  // namespace

nlohmann::json PipelineConfig::to_json() const {
  return {
      {"model.width", model.width},
      {"model.height", model.height},
      {"frame.width", dims.width},
      {"frame.height", dims.height},
      {"smoothing.window_size", smoothing.window_size()},
      {"smoothing.edge", edge_name(smoothing.edge)},
      {"sbd.bins", sbd.bins},
      {"sbd.seg_len", sbd.seg_len},
      {"sbd.dedup", sbd.dedup},
      {"seed", seed},
      {"noise.sigma", noise_sigma},
      {"render.width", render.width},
      {"render.height", render.height},
      {"camera.affine", camera_affine},
  };
}

void PipelineConfig::apply(const nlohmann::json& flat) {
  if (!flat.is_object()) throw InputError("config must be a JSON object");
  try {
    for (const auto& [key, value] : flat.items()) {
      if (key == "model.width") model = RinkModel(value.get<double>(), model.height);
      else if (key == "model.height") model = RinkModel(model.width, value.get<double>());
      else if (key == "frame.width") dims = FrameDims(value.get<int>(), dims.height);
      else if (key == "frame.height") dims = FrameDims(dims.width, value.get<int>());
      else if (key == "smoothing.window_size") smoothing.window_m = value.get<int>() - 1;
      else if (key == "smoothing.edge") smoothing.edge = parse_edge(value.get<std::string>());
      else if (key == "sbd.bins") sbd.bins = value.get<int>();
      else if (key == "sbd.seg_len") sbd.seg_len = value.get<int>();
      else if (key == "sbd.dedup") sbd.dedup = value.get<bool>();
      else if (key == "seed") seed = value.get<std::uint64_t>();
      else if (key == "noise.sigma") noise_sigma = value.get<double>();
      else if (key == "render.width") render = FrameDims(value.get<int>(), render.height);
      else if (key == "render.height") render = FrameDims(render.width, value.get<int>());
      else if (key == "camera.affine") camera_affine = value.get<bool>();
      else if (key.rfind("video.", 0) == 0) continue;  // simulation spec keys, read by `simulate`
      else throw InputError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad config value: ") + e.what());
  }
}

void PipelineConfig::validate() const {
  smoothing.validate();
  sbd.validate();
  if (!(noise_sigma >= 0)) throw InputError("noise.sigma must be non-negative");
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace rinkloc::app
