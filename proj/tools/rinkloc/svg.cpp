#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "app.hpp"

namespace rinkloc::app {

namespace {

constexpr double kWidth = 900, kHeight = 420;
constexpr double kLeft = 70, kRight = 170, kTop = 40, kBottom = 50;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

const char* kPalette[4] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

}  // namespace

std::string line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series, bool invert_y) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      x0 = std::min(x0, s.xs[i]);
      x1 = std::max(x1, s.xs[i]);
      y0 = std::min(y0, s.ys[i]);
      y1 = std::max(y1, s.ys[i]);
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-9) x1 = x0 + 1;
  if (y1 - y0 < 1e-9) y1 = y0 + 1;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  const auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  const auto py = [&](double y) {
    const double t = (y - y0) / (y1 - y0);
    return invert_y ? kTop + t * ph : kTop + (1 - t) * ph;
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
      << "</text>\n";
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4, yv = y0 + (y1 - y0) * i / 4;
    svg << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << kHeight - kBottom + 16 << "\" text-anchor=\"middle\">"
        << fmt(xv) << "</text>\n";
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << fmt(py(yv) + 4) << "\" text-anchor=\"end\">" << fmt(yv)
        << "</text>\n";
  }
  svg << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">"
      << escape(x_label) << "</text>\n";
  svg << "<text x=\"16\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << kTop + ph / 2 << ")\">" << escape(y_label) << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"" << (s.dashed ? "1" : "1.8") << "\""
        << (s.dashed ? " stroke-dasharray=\"4 3\" opacity=\"0.7\"" : "") << " points=\"";
    for (std::size_t i = 0; i < s.xs.size(); ++i) svg << (i ? " " : "") << fmt(px(s.xs[i])) << ',' << fmt(py(s.ys[i]));
    svg << "\"><title>" << escape(s.label) << "</title></polyline>\n";
    const double ly = kTop + 14 + 18 * double(k);
    svg << "<line x1=\"" << kWidth - kRight + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << kWidth - kRight + 36
        << "\" y2=\"" << ly - 4 << "\" stroke=\"" << s.color << "\"" << (s.dashed ? " stroke-dasharray=\"4 3\"" : "")
        << "/>\n";
    svg << "<text x=\"" << kWidth - kRight + 42 << "\" y=\"" << ly << "\">" << escape(s.label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_trajectory_plots(const std::filesystem::path& out_dir, const Trajectory& before, const Trajectory& after,
                            const RinkModel& model) {
  std::vector<double> frames(before.size());
  for (std::size_t i = 0; i < frames.size(); ++i) frames[i] = double(before.frame_index(i));

  const auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream out(out_dir / name);
    if (!out) throw IoError("cannot write " + (out_dir / name).string());
    out << body;
  };

  const char* axis_names[2] = {"x", "y"};
  for (int c = 0; c < 2; ++c) {
    std::vector<Series> series;
    for (int p = 0; p < 4; ++p) {
      const std::string name = std::string(axis_names[c]) + std::to_string(p + 1);
      series.push_back({name + " before", kPalette[p], frames, before.series(p, c), true});
      series.push_back({name + " after", kPalette[p], frames, after.series(p, c), false});
    }
    write(std::string(axis_names[c]) + "_coords.svg",
          line_chart(std::string(axis_names[c]) + "-coordinates of the control points", "frame",
                     std::string(axis_names[c]) + " (model px)", series));
  }

  std::vector<Series> path;
  path.push_back({"rink", "#999999", {0, model.width, model.width, 0, 0}, {0, 0, model.height, model.height, 0}, true});
  path.push_back({"p1 before", kPalette[1], before.series(0, 0), before.series(0, 1), true});
  path.push_back({"p1 after", kPalette[0], after.series(0, 0), after.series(0, 1), false});
  write("p1_path.svg", line_chart("p1 on the rink model", "x (model px)", "y (model px)", path, true));
}

}  // namespace rinkloc::app
