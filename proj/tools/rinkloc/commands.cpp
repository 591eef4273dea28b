#include <cstdlib>
#include <fstream>
#include <ostream>
#include <random>

#include <CLI11.hpp>

#include "app.hpp"

namespace rinkloc::app {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CommonOptions {
  std::string config_path;
  std::string out_dir = "out";
  int bins = 0, seg_len = 0, window = 0, frame_w = 0, frame_h = 0;
  double model_w = 0, model_h = 0, sigma = 0;
  std::uint64_t seed = 0;
  std::string edge;
  bool no_dedup = false;
  std::vector<CLI::Option*> given;
  CLI::Option *o_bins{}, *o_seg{}, *o_window{}, *o_fw{}, *o_fh{}, *o_mw{}, *o_mh{}, *o_sigma{}, *o_seed{}, *o_edge{};
};

void add_common(CLI::App* sub, CommonOptions& o) {
  sub->add_option("--config", o.config_path, "JSON config with flat dotted keys");
  sub->add_option("-o,--out", o.out_dir, "Output directory")->capture_default_str();
  o.o_bins = sub->add_option("--bins", o.bins, "Histogram bins per channel");
  o.o_seg = sub->add_option("--seg-len", o.seg_len, "Frames per segment");
  sub->add_flag("--no-dedup", o.no_dedup, "Keep boundaries found twice in overlapping mega-groups");
  o.o_window = sub->add_option("--window", o.window, "Hann window size (odd)");
  o.o_edge = sub->add_option("--edge", o.edge, "Edge policy: reflect or shrink");
  o.o_fw = sub->add_option("--frame-width", o.frame_w, "Broadcast frame width (px)");
  o.o_fh = sub->add_option("--frame-height", o.frame_h, "Broadcast frame height (px)");
  o.o_mw = sub->add_option("--model-width", o.model_w, "Rink model width (model px)");
  o.o_mh = sub->add_option("--model-height", o.model_h, "Rink model height (model px)");
  o.o_sigma = sub->add_option("--sigma", o.sigma, "Synthetic prediction noise (model px)");
  o.o_seed = sub->add_option("--seed", o.seed, "Master seed");
}

std::uint64_t env_seed() {
  const char* s = std::getenv("RINK_SEED");
  if (!s) return 0;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != std::string(s).size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError(std::string("RINK_SEED is not an unsigned integer: ") + s);
  }
}

// Precedence: defaults < config file < RINK_SEED < command-line flags.
PipelineConfig resolve(const CommonOptions& o, json* file_doc = nullptr) {
  PipelineConfig cfg;
  if (!o.config_path.empty()) {
    json doc = read_json_file(o.config_path);
    cfg.apply(doc);
    if (file_doc) *file_doc = std::move(doc);
  }
  if (std::getenv("RINK_SEED")) cfg.seed = env_seed();
  json flags = json::object();
  if (o.o_bins->count()) flags["sbd.bins"] = o.bins;
  if (o.o_seg->count()) flags["sbd.seg_len"] = o.seg_len;
  if (o.no_dedup) flags["sbd.dedup"] = false;
  if (o.o_window->count()) flags["smoothing.window_size"] = o.window;
  if (o.o_edge->count()) flags["smoothing.edge"] = o.edge;
  if (o.o_fw->count()) flags["frame.width"] = o.frame_w;
  if (o.o_fh->count()) flags["frame.height"] = o.frame_h;
  if (o.o_mw->count()) flags["model.width"] = o.model_w;
  if (o.o_mh->count()) flags["model.height"] = o.model_h;
  if (o.o_sigma->count()) flags["noise.sigma"] = o.sigma;
  if (o.o_seed->count()) flags["seed"] = o.seed;
  cfg.apply(flags);
  cfg.validate();
  return cfg;
}

fs::path ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  return fs::path(dir);
}

json stats_json(const ProjectionErrorStats& s) { return {{"mean", s.mean}, {"var", s.variance}, {"median", s.median}}; }

json metrics_json(const SequenceMetrics& m) {
  return {{"iou_part", 100.0 * m.iou_part_mean}, {"proj", stats_json(m.proj)}, {"frames", m.frames}};
}

json shots_json(const std::vector<std::pair<std::int64_t, std::int64_t>>& shots) {
  json out = json::array();
  for (const auto& [s, e] : shots) out.push_back({s, e});
  return out;
}

std::optional<double> try_smoothness(const Trajectory& t) {
  try {
    return smoothness(t).overall;
  } catch (const Error&) {
    return std::nullopt;
  }
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::vector<std::pair<std::int64_t, std::int64_t>> run_detection(FrameSource& frames, const SbdConfig& sbd,
                                                                 std::vector<std::int64_t>& boundaries) {
  ShotDetector detector(sbd);
  while (auto frame = frames.next()) detector.push(*frame);
  boundaries = detector.finish();
  if (!sbd.dedup) return shots_from_boundaries(dedup_boundaries(boundaries), detector.frames_seen());
  return shots_from_boundaries(boundaries, detector.frames_seen());
}

DirectoryFrameSource open_frames(const std::string& input) {
  const fs::path p(input);
  std::error_code ec;
  if (fs::is_directory(p, ec)) return DirectoryFrameSource(p);
  if (fs::is_regular_file(p, ec)) return DirectoryFrameSource::from_list_file(p);
  throw IoError("no such frame directory or list file: " + input);
}

void write_boundaries(const fs::path& out, const std::vector<std::int64_t>& boundaries,
                      const std::vector<std::pair<std::int64_t, std::int64_t>>& shots, std::int64_t n,
                      const json& config) {
  write_json_file(out / "boundaries.json",
                  {{"boundaries", boundaries}, {"shots", shots_json(shots)}, {"num_frames", n}, {"config", config}});
  std::ofstream txt(out / "boundaries.txt");
  if (!txt) throw IoError("cannot write " + (out / "boundaries.txt").string());
  for (auto b : boundaries) txt << b << '\n';
}

std::vector<std::pair<std::int64_t, std::int64_t>> load_shots(const std::string& path, const Trajectory& traj) {
  if (path.empty()) return {{traj.first_frame, traj.end_frame()}};
  const json doc = read_json_file(path);
  try {
    std::vector<std::pair<std::int64_t, std::int64_t>> shots;
    for (const auto& s : doc.at("shots")) shots.emplace_back(s.at(0).get<std::int64_t>(), s.at(1).get<std::int64_t>());
    if (shots.empty() || shots.front().first != traj.first_frame || shots.back().second != traj.end_frame())
      throw InputError(path + ": shots do not cover the trajectory");
    for (std::size_t i = 1; i < shots.size(); ++i)
      if (shots[i].first != shots[i - 1].second) throw InputError(path + ": shots are not contiguous");
    return shots;
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

// Smooths every shot independently and concatenates the results.
Trajectory smooth_per_shot(const Trajectory& traj, const std::vector<std::pair<std::int64_t, std::int64_t>>& shots,
                           const SmoothingConfig& cfg) {
  Trajectory out;
  out.first_frame = traj.first_frame;
  for (const auto& [s, e] : shots) {
    const Trajectory part = smooth_trajectory(traj.slice(s, e), cfg);
    out.points.insert(out.points.end(), part.points.begin(), part.points.end());
  }
  return out;
}

// Before/after smoothing report over shots; metrics only when gt is given.
json evaluation_report(const Trajectory& raw, const Trajectory& smoothed,
                       const std::vector<std::pair<std::int64_t, std::int64_t>>& shots,
                       const std::vector<Homographyd>* gt, const PipelineConfig& cfg,
                       const std::vector<Homographyd>* raw_h = nullptr) {
  const auto h_raw = raw_h ? *raw_h : homographies_from_trajectory(raw, cfg.dims);
  const auto h_smooth = homographies_from_trajectory(smoothed, cfg.dims);
  json per_shot = json::array();
  double sum_before = 0, sum_after = 0;
  int scored = 0;
  std::vector<Homographyd> interior_est, interior_gt;
  const std::int64_t margin = cfg.smoothing.window_m / 2;
  for (const auto& [s, e] : shots) {
    const auto before = try_smoothness(raw.slice(s, e));
    const auto after = try_smoothness(smoothed.slice(s, e));
    json row = {{"start", s}, {"end", e}, {"S_BFS", optional_json(before)}, {"S_AFS", optional_json(after)}};
    if (before && after) {
      row["Difference"] = *before - *after;
      sum_before += *before;
      sum_after += *after;
      ++scored;
    } else {
      row["Difference"] = nullptr;
    }
    if (gt) {
      const std::size_t b = std::size_t(s - raw.first_frame), n = std::size_t(e - s);
      const std::span<const Homographyd> g(gt->data() + b, n);
      row["bfs"] = metrics_json(evaluate_sequence(std::span(h_raw.data() + b, n), g, cfg.dims, cfg.model));
      row["afs"] = metrics_json(evaluate_sequence(std::span(h_smooth.data() + b, n), g, cfg.dims, cfg.model));
      for (std::int64_t f = s + margin; f < e - margin; ++f) {
        interior_est.push_back(h_smooth[std::size_t(f - raw.first_frame)]);
        interior_gt.push_back((*gt)[std::size_t(f - raw.first_frame)]);
      }
    }
    per_shot.push_back(std::move(row));
  }

  json report;
  if (gt) {
    const auto bfs = evaluate_sequence(h_raw, *gt, cfg.dims, cfg.model);
    const auto afs = evaluate_sequence(h_smooth, *gt, cfg.dims, cfg.model);
    report["iou_part_mean"] = 100.0 * bfs.iou_part_mean;
    report["proj"] = stats_json(bfs.proj);
    report["comparison"] = {{"bfs", metrics_json(bfs)}, {"afs", metrics_json(afs)}};
    if (!interior_est.empty())
      report["comparison"]["afs_interior"] = metrics_json(evaluate_sequence(interior_est, interior_gt, cfg.dims, cfg.model));
  }
  if (scored > 0) {
    const double before = sum_before / scored, after = sum_after / scored;
    report["smoothness"] = {{"before", before}, {"after", after}, {"reduction", before - after}, {"shots", scored}};
  } else {
    report["smoothness"] = {{"before", nullptr}, {"after", nullptr}, {"reduction", nullptr}, {"shots", 0}};
  }
  report["per_shot"] = per_shot;
  report["frames"] = raw.size();
  report["config"] = cfg.to_json();
  return report;
}

// Homography files are scored as given; the trajectory is only used for smoothing.
Trajectory load_estimate(const std::string& path, const FrameDims& dims, std::optional<std::vector<Homographyd>>& hs_out) {
  if (fs::path(path).extension() == ".json") {
    const auto hs = load_homographies(path);
    if (hs.empty()) throw InputError(path + ": no frames");
    std::vector<Homographyd> plain;
    for (const auto& ih : hs) plain.push_back(ih.h);
    hs_out = plain;
    return trajectory_from_homographies(plain, dims, hs.front().index);
  }
  return load_predictions(path);
}

std::vector<Homographyd> load_ground_truth(const std::string& path, const Trajectory& est) {
  const auto hs = load_homographies(path);
  if (hs.size() != est.size())
    throw InputError("frame count mismatch: estimate has " + std::to_string(est.size()) + ", ground truth has " +
                     std::to_string(hs.size()));
  if (hs.front().index != est.first_frame) throw InputError("estimate and ground truth start at different frames");
  std::vector<Homographyd> out;
  for (const auto& ih : hs) out.push_back(ih.h);
  return out;
}

int cmd_detect_shots(const std::string& input, const CommonOptions& o, std::ostream& out) {
  const PipelineConfig cfg = resolve(o);
  auto frames = open_frames(input);
  std::vector<std::int64_t> boundaries;
  const auto shots = run_detection(frames, cfg.sbd, boundaries);
  json config = cfg.to_json();
  config["input"] = input;
  const auto dir = ensure_dir(o.out_dir);
  write_boundaries(dir, boundaries, shots, std::int64_t(frames.size()), config);
  out << boundaries.size() << " boundaries, " << shots.size() << " shots\n";
  return kOk;
}

int cmd_smooth(const std::string& input, const std::string& shots_path, const CommonOptions& o, std::ostream& out) {
  const PipelineConfig cfg = resolve(o);
  const Trajectory raw = load_predictions(input);
  const auto shots = load_shots(shots_path, raw);
  const Trajectory smoothed = smooth_per_shot(raw, shots, cfg.smoothing);
  const auto dir = ensure_dir(o.out_dir);
  save_trajectory(dir / "smoothed.csv", smoothed);
  save_homographies(dir / "homographies.json", homographies_from_trajectory(smoothed, cfg.dims), smoothed.first_frame);
  json report = evaluation_report(raw, smoothed, shots, nullptr, cfg);
  report["config"]["input"] = input;
  write_json_file(dir / "report.json", report);
  out << "smoothed " << raw.size() << " frames\n";
  return kOk;
}

int cmd_evaluate(const std::string& est_path, const std::string& gt_path, const std::string& shots_path,
                 const CommonOptions& o, std::ostream& out) {
  const PipelineConfig cfg = resolve(o);
  std::optional<std::vector<Homographyd>> est_h;
  const Trajectory raw = load_estimate(est_path, cfg.dims, est_h);
  const auto gt = load_ground_truth(gt_path, raw);
  const auto shots = load_shots(shots_path, raw);
  const Trajectory smoothed = smooth_per_shot(raw, shots, cfg.smoothing);
  json report = evaluation_report(raw, smoothed, shots, &gt, cfg, est_h ? &*est_h : nullptr);
  report["config"]["est"] = est_path;
  report["config"]["gt"] = gt_path;
  const auto dir = ensure_dir(o.out_dir);
  write_json_file(dir / "metrics.json", report);
  write_trajectory_plots(dir, raw, smoothed, cfg.model);
  out << "IOU_part " << report["iou_part_mean"].get<double>() << ", mean projection error "
      << report["proj"]["mean"].get<double>() << '\n';
  return kOk;
}

int cmd_simulate(const std::string& spec_path, const CommonOptions& o, std::ostream& out) {
  json doc;
  CommonOptions with_spec = o;
  with_spec.config_path = spec_path;
  const PipelineConfig cfg = resolve(with_spec, &doc);

  SyntheticVideoSpec video;
  std::mt19937_64 master(cfg.seed);
  try {
    video.n_frames = doc.at("video.n_frames").get<std::int64_t>();
    video.cuts = doc.value("video.cuts", std::vector<std::int64_t>{});
    const std::string texture = doc.value("video.texture", std::string("flat"));
    if (texture == "flat") video.texture = Texture::FlatColor;
    else if (texture == "noise") video.texture = Texture::NoisePattern;
    else throw InputError("video.texture must be 'flat' or 'noise'");
    if (doc.contains("video.scene_seeds")) video.scene_seeds = doc["video.scene_seeds"].get<std::vector<std::uint64_t>>();
  } catch (const json::exception& e) {
    throw InputError(spec_path + ": " + e.what());
  }
  video.dims = cfg.render;
  if (video.scene_seeds.empty())
    for (std::size_t i = 0; i <= video.cuts.size(); ++i) video.scene_seeds.push_back(master());
  const std::uint64_t noise_seed = master();

  const fs::path dir = ensure_dir(o.out_dir);
  render_synthetic_video(video, dir / "frames");

  // One independent camera per shot.
  std::vector<Homographyd> gt;
  const auto shots = shots_from_boundaries(video.cuts, video.n_frames);
  for (const auto& [s, e] : shots) {
    const CameraPath path = random_broadcast_path(master(), cfg.dims, cfg.model, e - s, cfg.camera_affine);
    const auto hs = camera_homographies(path, e - s);
    gt.insert(gt.end(), hs.begin(), hs.end());
  }
  const Trajectory truth = trajectory_from_homographies(gt, cfg.dims);
  save_homographies(dir / "gt_homographies.json", gt);
  save_trajectory(dir / "gt_trajectory.csv", truth);
  save_trajectory(dir / "predictions.csv", add_gaussian_noise(truth, cfg.noise_sigma, noise_seed));

  json manifest = {{"n_frames", video.n_frames},
                   {"cuts", video.cuts},
                   {"scene_seeds", video.scene_seeds},
                   {"shots", shots_json(shots)},
                   {"config", cfg.to_json()}};
  write_json_file(dir / "simulation.json", manifest);
  out << "rendered " << video.n_frames << " frames, " << shots.size() << " shots\n";
  return kOk;
}

int cmd_pipeline(const std::string& frames_input, const std::string& pred_path, const std::string& gt_path,
                 const CommonOptions& o, std::ostream& out) {
  const PipelineConfig cfg = resolve(o);
  const Trajectory raw = load_predictions(pred_path);
  auto frames = open_frames(frames_input);
  if (std::int64_t(frames.size()) != std::int64_t(raw.size()) || raw.first_frame != 0)
    throw InputError("frame count mismatch: " + std::to_string(frames.size()) + " frames, " +
                     std::to_string(raw.size()) + " prediction rows starting at frame " +
                     std::to_string(raw.first_frame));
  std::vector<std::int64_t> boundaries;
  const auto shots = run_detection(frames, cfg.sbd, boundaries);
  const Trajectory smoothed = smooth_per_shot(raw, shots, cfg.smoothing);

  std::optional<std::vector<Homographyd>> gt;
  if (!gt_path.empty()) gt = load_ground_truth(gt_path, raw);

  json config = cfg.to_json();
  config["frames"] = frames_input;
  config["predictions"] = pred_path;
  if (gt) config["gt"] = gt_path;

  const auto dir = ensure_dir(o.out_dir);
  write_boundaries(dir, boundaries, shots, std::int64_t(frames.size()), config);
  save_trajectory(dir / "smoothed.csv", smoothed);
  save_homographies(dir / "homographies.json", homographies_from_trajectory(smoothed, cfg.dims));
  json report = evaluation_report(raw, smoothed, shots, gt ? &*gt : nullptr, cfg);
  report["boundaries"] = boundaries;
  report["shots"] = shots_json(shots);
  report["config"] = config;
  write_json_file(dir / "report.json", report);
  write_trajectory_plots(dir, raw, smoothed, cfg.model);
  out << shots.size() << " shots, " << raw.size() << " frames smoothed\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Broadcast hockey rink localization toolkit"};
  app.require_subcommand(1);

  CommonOptions detect_o, smooth_o, eval_o, sim_o, pipe_o;
  std::string detect_in, smooth_in, smooth_shots, eval_est, eval_gt, eval_shots, sim_spec, pipe_frames, pipe_pred,
      pipe_gt;

  auto* detect = app.add_subcommand("detect-shots", "Cut detection over a directory or list of frames");
  detect->add_option("frames", detect_in, "Frame directory or list file")->required();
  add_common(detect, detect_o);

  auto* smooth = app.add_subcommand("smooth", "Hann-smooth a control-point trajectory");
  smooth->add_option("trajectory", smooth_in, "Trajectory CSV")->required();
  smooth->add_option("--shots", smooth_shots, "boundaries.json; smoothing never crosses a shot");
  add_common(smooth, smooth_o);

  auto* evaluate = app.add_subcommand("evaluate", "Score predictions against ground truth");
  evaluate->add_option("--est", eval_est, "Estimated trajectory CSV or homography JSON")->required();
  evaluate->add_option("--gt", eval_gt, "Ground-truth homography JSON")->required();
  evaluate->add_option("--shots", eval_shots, "boundaries.json");
  add_common(evaluate, eval_o);

  auto* simulate = app.add_subcommand("simulate", "Render a synthetic video with ground truth");
  simulate->add_option("spec", sim_spec, "Simulation spec (flat dotted JSON)")->required();
  add_common(simulate, sim_o);

  auto* pipeline = app.add_subcommand("pipeline", "Shot detection, smoothing and evaluation end to end");
  pipeline->add_option("frames", pipe_frames, "Frame directory or list file")->required();
  pipeline->add_option("predictions", pipe_pred, "Prediction trajectory CSV")->required();
  pipeline->add_option("--gt", pipe_gt, "Ground-truth homography JSON");
  add_common(pipeline, pipe_o);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*detect) return cmd_detect_shots(detect_in, detect_o, out);
    if (*smooth) return cmd_smooth(smooth_in, smooth_shots, smooth_o, out);
    if (*evaluate) return cmd_evaluate(eval_est, eval_gt, eval_shots, eval_o, out);
    if (*simulate) return cmd_simulate(sim_spec, sim_o, out);
    if (*pipeline) return cmd_pipeline(pipe_frames, pipe_pred, pipe_gt, pipe_o, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kInvariant;
  }
  return kInputError;
}

}  // namespace rinkloc::app
