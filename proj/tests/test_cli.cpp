#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "app.hpp"
#include "rinkloc/predictor.hpp"
#include "rinkloc/smoothing.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rinkloc;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = app::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("rinkloc_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

json load(const fs::path& p) { return json::parse(slurp(p)); }

fs::path simulate(const fs::path& dir, const json& spec, std::vector<std::string> extra = {}) {
  std::ofstream(dir / "spec.json") << spec.dump();
  std::vector<std::string> args = {"simulate", (dir / "spec.json").string(), "-o", (dir / "sim").string()};
  args.insert(args.end(), extra.begin(), extra.end());
  const auto r = cli(args);
  REQUIRE_MESSAGE(r.code == 0, r.err);
  return dir / "sim";
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(cli({"--help"}).code == 0);
  CHECK(cli({}).code == 2);
  CHECK(cli({"detect-shots"}).code == 2);
  CHECK(cli({"smooth", "x.csv", "--window", "abc"}).code == 2);
}

TEST_CASE("detect-shots on a missing directory") {
  const auto r = cli({"detect-shots", "/nonexistent/frames_dir", "-o", scratch("missing").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("/nonexistent/frames_dir") != std::string::npos);
}

TEST_CASE("detect-shots on simulated videos") {
  const auto dir = scratch("detect");
  const auto sim = simulate(dir, {{"video.n_frames", 300}, {"video.cuts", {150}}, {"video.texture", "noise"}});
  REQUIRE(fs::exists(sim / "frames" / "frame_000299.ppm"));
  CHECK(cli({"detect-shots", (sim / "frames").string(), "-o", (dir / "det").string()}).code == 0);
  const json report = load(dir / "det" / "boundaries.json");
  CHECK(report["boundaries"] == json::array({150}));
  CHECK(report["num_frames"] == 300);
  CHECK(report["shots"] == json::parse("[[0,150],[150,300]]"));
  CHECK(slurp(dir / "det" / "boundaries.txt") == "150\n");

  const auto still_dir = scratch("detect_still");
  const auto still = simulate(still_dir, {{"video.n_frames", 120}});
  CHECK(cli({"detect-shots", (still / "frames").string(), "-o", (still_dir / "det").string()}).code == 0);
  CHECK(load(still_dir / "det" / "boundaries.json")["boundaries"].empty());
}

TEST_CASE("detect-shots reports decode errors as input errors") {
  const auto dir = scratch("decode");
  std::ofstream(dir / "frame_0.ppm") << "P6\n4 4\n255\n";
  const auto r = cli({"detect-shots", dir.string(), "-o", (dir / "out").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("frame 0") != std::string::npos);
}

TEST_CASE("smooth") {
  const auto dir = scratch("smooth");
  std::ofstream(dir / "bad.csv") << "frame,x1,y1,x2,y2,x3,y3,x4,y4\n0,1,2,3\n";
  const auto bad = cli({"smooth", (dir / "bad.csv").string(), "-o", (dir / "out").string()});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("line 2") != std::string::npos);

  const auto sim = simulate(dir, {{"video.n_frames", 200}, {"camera.affine", true}, {"noise.sigma", 0.0}});
  CHECK(cli({"smooth", (sim / "predictions.csv").string(), "-o", (dir / "clean").string()}).code == 0);
  const auto in = load_predictions(sim / "predictions.csv");
  const auto out = load_predictions(dir / "clean" / "smoothed.csv");
  REQUIRE(out.size() == in.size());
  for (std::size_t f = 7; f + 7 < in.size(); ++f)
    for (int k = 0; k < 4; ++k) CHECK((out.points[f][k] - in.points[f][k]).norm() < 1e-9);
  CHECK(fs::exists(dir / "clean" / "homographies.json"));

  const auto noisy = simulate(dir, {{"video.n_frames", 200}, {"noise.sigma", 3.0}});
  CHECK(cli({"smooth", (noisy / "predictions.csv").string(), "-o", (dir / "noisy").string()}).code == 0);
  const json report = load(dir / "noisy" / "report.json");
  CHECK(report["smoothness"]["after"].get<double>() < report["smoothness"]["before"].get<double>());
}

TEST_CASE("evaluate") {
  const auto dir = scratch("evaluate");
  const auto sim = simulate(dir, {{"video.n_frames", 300}, {"video.cuts", {120}}, {"noise.sigma", 3.0}});
  const std::string gt = (sim / "gt_homographies.json").string();

  REQUIRE(cli({"evaluate", "--est", gt, "--gt", gt, "-o", (dir / "self").string()}).code == 0);
  const json self = load(dir / "self" / "metrics.json");
  CHECK(self["iou_part_mean"].get<double>() == 100.0);
  CHECK(self["proj"]["mean"].get<double>() == 0.0);
  CHECK(self["proj"]["var"].get<double>() == 0.0);
  CHECK(self["proj"]["median"].get<double>() == 0.0);

  REQUIRE(cli({"evaluate", "--est", (sim / "predictions.csv").string(), "--gt", gt, "--shots",
               (sim / "simulation.json").string(), "-o", (dir / "noisy").string()})
              .code == 0);
  const json noisy = load(dir / "noisy" / "metrics.json");
  REQUIRE(noisy["per_shot"].size() == 2);
  for (const auto& row : noisy["per_shot"]) CHECK(row["Difference"].get<double>() > 0);
  for (const char* plot : {"x_coords.svg", "y_coords.svg", "p1_path.svg"}) {
    const auto svg = slurp(dir / "noisy" / plot);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("polyline") != std::string::npos);
  }

  const auto hs = load_homographies(gt);
  std::vector<Homographyd> shorter;
  for (std::size_t i = 0; i + 1 < hs.size(); ++i) shorter.push_back(hs[i].h);
  save_homographies(dir / "short.json", shorter);
  const auto mismatch = cli({"evaluate", "--est", (sim / "predictions.csv").string(), "--gt",
                             (dir / "short.json").string(), "-o", (dir / "mm").string()});
  CHECK(mismatch.code == 2);
  CHECK(mismatch.err.find("mismatch") != std::string::npos);
}

TEST_CASE("pipeline with exact predictions reproduces ground truth") {
  const auto dir = scratch("pipeline_exact");
  const auto sim = simulate(dir, {{"video.n_frames", 200}, {"camera.affine", true}, {"noise.sigma", 0.0}});
  REQUIRE(cli({"pipeline", (sim / "frames").string(), (sim / "predictions.csv").string(), "--gt",
               (sim / "gt_homographies.json").string(), "-o", (dir / "out").string()})
              .code == 0);
  const json r = load(dir / "out" / "report.json");
  CHECK(r["boundaries"].empty());
  CHECK(std::abs(r["iou_part_mean"].get<double>() - 100.0) <= 1e-6);
  CHECK(r["proj"]["mean"].get<double>() < 1e-6);
  const auto& interior = r["comparison"]["afs_interior"];
  CHECK(interior["frames"] == 186);
  CHECK(interior["proj"]["mean"].get<double>() < 1e-6);
  CHECK(interior["iou_part"].get<double>() > 99.9999);
}

TEST_CASE("pipeline smooths each shot on its own") {
  const auto dir = scratch("pipeline_shots");
  const auto sim =
      simulate(dir, {{"video.n_frames", 240}, {"video.cuts", {100}}, {"video.texture", "noise"}, {"noise.sigma", 3.0}});
  REQUIRE(cli({"pipeline", (sim / "frames").string(), (sim / "predictions.csv").string(), "--gt",
               (sim / "gt_homographies.json").string(), "-o", (dir / "out").string()})
              .code == 0);
  const json r = load(dir / "out" / "report.json");
  CHECK(r["boundaries"] == json::array({100}));
  CHECK(r["smoothness"]["reduction"].get<double>() > 0);

  const auto raw = load_predictions(sim / "predictions.csv");
  const auto smoothed = load_predictions(dir / "out" / "smoothed.csv");
  const auto first = smooth_trajectory(raw.slice(0, 100));
  const auto second = smooth_trajectory(raw.slice(100, 240));
  for (std::size_t f = 0; f < 240; ++f) {
    const auto& want = f < 100 ? first.points[f] : second.points[f - 100];
    for (int k = 0; k < 4; ++k) REQUIRE(smoothed.points[f][k] == want[k]);
  }

  std::ofstream(dir / "short.csv") << "frame,x1,y1,x2,y2,x3,y3,x4,y4\n0,1,2,3,4,5,6,7,8\n";
  CHECK(cli({"pipeline", (sim / "frames").string(), (dir / "short.csv").string(), "-o", (dir / "mm2").string()})
            .code == 2);
}

TEST_CASE("configuration precedence") {
  const auto dir = scratch("config");
  std::ofstream(dir / "cfg.json") << R"({"smoothing.window_size": 9, "seed": 5})";
  std::ofstream(dir / "traj.csv") << "frame,x1,y1,x2,y2,x3,y3,x4,y4\n0,0,10,0,20,30,20,30,10\n1,1,10,1,20,31,20,31,10\n";
  REQUIRE(cli({"smooth", (dir / "traj.csv").string(), "--config", (dir / "cfg.json").string(), "-o",
               (dir / "a").string()})
              .code == 0);
  CHECK(load(dir / "a" / "report.json")["config"]["smoothing.window_size"] == 9);
  REQUIRE(cli({"smooth", (dir / "traj.csv").string(), "--config", (dir / "cfg.json").string(), "--window", "21", "-o",
               (dir / "b").string()})
              .code == 0);
  CHECK(load(dir / "b" / "report.json")["config"]["smoothing.window_size"] == 21);

  ::setenv("RINK_SEED", "77", 1);
  REQUIRE(cli({"smooth", (dir / "traj.csv").string(), "--config", (dir / "cfg.json").string(), "-o",
               (dir / "c").string()})
              .code == 0);
  CHECK(load(dir / "c" / "report.json")["config"]["seed"] == 77);
  REQUIRE(cli({"smooth", (dir / "traj.csv").string(), "--seed", "3", "-o", (dir / "d").string()}).code == 0);
  CHECK(load(dir / "d" / "report.json")["config"]["seed"] == 3);
  ::unsetenv("RINK_SEED");

  std::ofstream(dir / "unknown.json") << R"({"smoothing.windw": 9})";
  CHECK(cli({"smooth", (dir / "traj.csv").string(), "--config", (dir / "unknown.json").string(), "-o",
             (dir / "e").string()})
            .code == 2);
  CHECK(cli({"smooth", (dir / "traj.csv").string(), "--window", "14", "-o", (dir / "f").string()}).code == 2);
}

TEST_CASE("seeded commands are deterministic") {
  const json spec = {{"video.n_frames", 150}, {"video.cuts", {70}}, {"video.texture", "noise"}};
  const auto a = scratch("det_a"), b = scratch("det_b");
  const auto sa = simulate(a, spec), sb = simulate(b, spec);
  for (const char* f : {"simulation.json", "predictions.csv", "gt_homographies.json", "frames/frame_000100.ppm"})
    CHECK(slurp(sa / f) == slurp(sb / f));

  const auto other = scratch("det_c");
  const auto sc = simulate(other, spec, {"--seed", "43"});
  CHECK(slurp(sc / "predictions.csv") != slurp(sa / "predictions.csv"));

  for (const auto& out : {a / "p", b / "p"})
    REQUIRE(cli({"pipeline", (sa / "frames").string(), (sa / "predictions.csv").string(), "--gt",
                 (sa / "gt_homographies.json").string(), "-o", out.string()})
                .code == 0);
  CHECK(slurp(a / "p" / "report.json") == slurp(b / "p" / "report.json"));
}
