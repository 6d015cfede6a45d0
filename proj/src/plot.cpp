// Copyright 2026 The rrnav Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rrnav/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "json_util.hpp"

namespace rrnav {
namespace {

using jsonio::json;

constexpr const char* kMetaVersion = "rollout-meta/1";
constexpr const char* kPriorColor = "#7b3294";
constexpr const char* kHybridColor = "#1a9641";
constexpr const char* kObstacleFill = "#bdbdbd";
const char* const kPalette[] = {"#1f78b4", "#e31a1c", "#33a02c", "#ff7f00", "#6a3d9a", "#b15928"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  // "-0.000" and "0.000" must print the same for byte-stable output.
  if (std::string(buf) == "-0.000") return "0.000";
  return buf;
}

// Maps world coordinates into an SVG viewport with y pointing up.
struct Frame {
  double x0, y0, x1, y1;  // data bounds
  double left, top, width, height;
  double sx(double x) const { return left + (x - x0) / (x1 - x0) * width; }
  double sy(double y) const { return top + (y1 - y) / (y1 - y0) * height; }
};

std::string header(double w, double h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string text(double x, double y, const std::string& s, const char* anchor = "start") {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"" +
         anchor + "\">" + s + "</text>\n";
}

std::string shape_svg(const Shape& s, const Frame& f, const char* fill, const char* stroke, const char* extra = "") {
  if (const auto* r = std::get_if<Rect>(&s)) {
    return "<rect x=\"" + num(f.sx(r->x_min)) + "\" y=\"" + num(f.sy(r->y_max)) + "\" width=\"" +
           num(f.sx(r->x_max) - f.sx(r->x_min)) + "\" height=\"" + num(f.sy(r->y_min) - f.sy(r->y_max)) +
           "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\"" + extra + "/>\n";
  }
  const auto& c = std::get<Circle>(s);
  return "<circle cx=\"" + num(f.sx(c.cx)) + "\" cy=\"" + num(f.sy(c.cy)) + "\" r=\"" +
         num(c.r / (f.x1 - f.x0) * f.width) + "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\"" + extra + "/>\n";
}

std::string polyline(const std::vector<std::pair<double, double>>& pts, const char* color, double width,
                     const char* extra = "") {
  std::string s = "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"" + num(width) +
                  "\"" + extra + " points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) s += ' ';
    s += num(pts[i].first) + "," + num(pts[i].second);
  }
  return s + "\"/>\n";
}

json pose_json(const Pose& p) { return json{p.x, p.y, p.theta}; }

}  // namespace

std::string serialize_rollout_meta(const RolloutMeta& m) {
  json j{{"version", kMetaVersion},
         {"world", json::parse(serialize_world(m.world))},
         {"start", pose_json(m.start)},
         {"goal", json{m.goal.x, m.goal.y}},
         {"mode", m.mode},
         {"seed", m.seed}};
  return j.dump(2) + "\n";
}

RolloutMeta parse_rollout_meta(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("rollout meta: ") + e.what());
  }
  const std::string w = "rollout meta";
  jsonio::check_keys(j, w, {"version", "world", "start", "goal", "mode", "seed"});
  if (jsonio::get<std::string>(j, w, "version") != kMetaVersion) {
    throw ConfigError("rollout meta: unsupported version");
  }
  RolloutMeta m;
  if (!j.contains("world")) throw ConfigError("rollout meta: missing key 'world'");
  m.world = parse_world(j.at("world").dump());
  const auto s = jsonio::get<std::vector<double>>(j, w, "start");
  const auto g = jsonio::get<std::vector<double>>(j, w, "goal");
  if (s.size() != 3 || g.size() != 2) throw ConfigError("rollout meta: bad start or goal");
  m.start = {s[0], s[1], s[2]};
  m.goal = {g[0], g[1]};
  m.mode = jsonio::get<std::string>(j, w, "mode");
  m.seed = jsonio::get<std::uint64_t>(j, w, "seed");
  return m;
}

std::string trajectory_svg(const RolloutMeta& meta, std::span<const TrajectoryRow> rows,
                           const GridPath* shortest, const OccupancyGrid* grid) {
  const auto& w = meta.world;
  const double px_per_m = 100.0;
  const double margin = 30.0;
  Frame f{-w.width / 2, -w.height / 2, w.width / 2, w.height / 2, margin, margin, w.width * px_per_m,
          w.height * px_per_m};
  std::string s = header(f.width + 2 * margin, f.height + 2 * margin + 24);
  s += "<rect x=\"" + num(f.left) + "\" y=\"" + num(f.top) + "\" width=\"" + num(f.width) + "\" height=\"" +
       num(f.height) + "\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";
  s += shape_svg(w.start_region, f, "#deebf7", "none", " opacity=\"0.6\"");
  s += shape_svg(w.goal_region, f, "#fee0d2", "none", " opacity=\"0.6\"");
  for (const auto& o : w.obstacles) s += shape_svg(o, f, kObstacleFill, "#636363");

  if (shortest && grid && !shortest->cells.empty()) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& c : shortest->cells) {
      const Vec2 p = grid->center(c);
      pts.emplace_back(f.sx(p.x), f.sy(p.y));
    }
    s += polyline(pts, "#2b8cbe", 1.5, " stroke-dasharray=\"6,4\"");
  }

  // Consecutive rows sharing a switch state form one segment.
  Vec2 prev{meta.start.x, meta.start.y};
  std::size_t i = 0;
  while (i < rows.size()) {
    const bool prior_only = rows[i].used_prior_only;
    std::vector<std::pair<double, double>> pts{{f.sx(prev.x), f.sy(prev.y)}};
    while (i < rows.size() && rows[i].used_prior_only == prior_only) {
      pts.emplace_back(f.sx(rows[i].pose.x), f.sy(rows[i].pose.y));
      prev = {rows[i].pose.x, rows[i].pose.y};
      ++i;
    }
    s += polyline(pts, prior_only ? kPriorColor : kHybridColor, 2.5);
  }
  s += "<circle cx=\"" + num(f.sx(meta.start.x)) + "\" cy=\"" + num(f.sy(meta.start.y)) +
       "\" r=\"5\" fill=\"black\"/>\n";
  s += "<circle cx=\"" + num(f.sx(meta.goal.x)) + "\" cy=\"" + num(f.sy(meta.goal.y)) +
       "\" r=\"6\" fill=\"none\" stroke=\"red\" stroke-width=\"2\"/>\n";
  const double ly = f.top + f.height + margin + 12;
  s += text(f.left, ly, meta.mode + ": green = hybrid, purple = prior only, dashed = grid shortest path");
  return s + "</svg>\n";
}

std::vector<ComponentBar> component_bars(std::span<const TrajectoryRow> rows) {
  std::vector<ComponentBar> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    ComponentBar b;
    b.t = r.t;
    b.prior = r.prior ? r.prior->omega : 0.0;
    b.executed = r.executed.omega;
    b.residual = b.executed - b.prior;
    b.epsilon = r.epsilon;
    out.push_back(b);
  }
  return out;
}

std::string components_svg(std::span<const TrajectoryRow> rows) {
  const auto bars = component_bars(rows);
  const double bar_w = 8.0;
  const double plot_w = std::max(200.0, bar_w * static_cast<double>(bars.size()));
  const double plot_h = 300.0;
  const double margin = 50.0;
  // Stacked segments can reach |prior| + |residual| <= 3 before clipping.
  double ymax = 1.0;
  for (const auto& b : bars) {
    ymax = std::max({ymax, std::abs(b.prior), std::abs(b.prior + b.residual), std::abs(b.residual)});
  }
  Frame f{0.0, -ymax, static_cast<double>(bars.size()), ymax, margin, margin, plot_w, plot_h};
  std::string s = header(plot_w + 2 * margin, plot_h + 2 * margin + 20);
  s += "<line x1=\"" + num(f.left) + "\" y1=\"" + num(f.sy(0)) + "\" x2=\"" + num(f.left + f.width) + "\" y2=\"" +
       num(f.sy(0)) + "\" stroke=\"black\"/>\n";
  auto seg = [&](double x, double from, double to, const char* color) {
    const double y0 = std::max(f.sy(from), f.sy(to));
    const double y1 = std::min(f.sy(from), f.sy(to));
    return "<rect x=\"" + num(x) + "\" y=\"" + num(y1) + "\" width=\"" + num(bar_w * 0.8) + "\" height=\"" +
           num(y0 - y1) + "\" fill=\"" + color + "\"/>\n";
  };
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const double x = f.sx(static_cast<double>(i));
    s += seg(x, 0.0, bars[i].prior, kPriorColor);
    s += seg(x, bars[i].prior, bars[i].prior + bars[i].residual, kHybridColor);
  }
  // Epsilon in [0, 1] drawn on the positive half-axis.
  std::vector<std::pair<double, double>> eps;
  for (std::size_t i = 0; i < bars.size(); ++i) {
    if (bars[i].epsilon) eps.emplace_back(f.sx(static_cast<double>(i) + 0.4), f.sy(*bars[i].epsilon * ymax));
  }
  if (!eps.empty()) s += polyline(eps, "#d7191c", 1.5);
  s += text(f.left, f.top - 10, "angular velocity: purple = prior, green = residual, red = switch probability");
  s += text(f.left - 5, f.sy(ymax) + 4, num(ymax), "end");
  s += text(f.left - 5, f.sy(-ymax) + 4, num(-ymax), "end");
  s += text(f.left + f.width / 2, f.top + f.height + 30, "timestep", "middle");
  return s + "</svg>\n";
}

std::vector<CurvePoint> curve_points(const CurveSeries& series) {
  std::map<int, std::vector<double>> by_episode;
  for (const auto& run : series.runs) {
    for (const auto& row : run.rows) by_episode[row.episode].push_back(row.path_length_m);
  }
  std::vector<CurvePoint> out;
  for (const auto& [ep, v] : by_episode) {
    CurvePoint p;
    p.episode = ep;
    double sum = 0.0;
    for (double x : v) sum += x;
    p.mean = sum / static_cast<double>(v.size());
    p.min = *std::min_element(v.begin(), v.end());
    p.max = *std::max_element(v.begin(), v.end());
    out.push_back(p);
  }
  return out;
}

std::string training_curve_svg(std::span<const CurveSeries> series) {
  std::vector<std::vector<CurvePoint>> pts;
  int max_ep = 1;
  double max_len = 1.0;
  for (const auto& s : series) {
    pts.push_back(curve_points(s));
    for (const auto& p : pts.back()) {
      max_ep = std::max(max_ep, p.episode);
      max_len = std::max(max_len, p.max);
    }
  }
  const double margin = 60.0;
  Frame f{0.0, 0.0, static_cast<double>(max_ep), max_len * 1.05, margin, margin, 640.0, 360.0};
  std::string s = header(f.width + 2 * margin, f.height + 2 * margin);
  s += "<rect x=\"" + num(f.left) + "\" y=\"" + num(f.top) + "\" width=\"" + num(f.width) + "\" height=\"" +
       num(f.height) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kPalette[k % std::size(kPalette)];
    const auto& p = pts[k];
    if (p.empty()) continue;
    std::string band = "<polygon fill=\"" + std::string(color) + "\" opacity=\"0.2\" points=\"";
    for (std::size_t i = 0; i < p.size(); ++i) {
      band += num(f.sx(p[i].episode)) + "," + num(f.sy(p[i].max)) + " ";
    }
    for (std::size_t i = p.size(); i-- > 0;) {
      band += num(f.sx(p[i].episode)) + "," + num(f.sy(p[i].min)) + (i ? " " : "");
    }
    s += band + "\"/>\n";
    std::vector<std::pair<double, double>> line;
    for (const auto& q : p) line.emplace_back(f.sx(q.episode), f.sy(q.mean));
    s += polyline(line, color, 1.5);
    s += text(f.left + f.width - 150, f.top + 20 + 16 * static_cast<double>(k), series[k].label);
    s += "<rect x=\"" + num(f.left + f.width - 170) + "\" y=\"" + num(f.top + 10 + 16 * static_cast<double>(k)) +
         "\" width=\"12\" height=\"12\" fill=\"" + color + "\"/>\n";
  }
  s += text(f.left + f.width / 2, f.top + f.height + 35, "episode", "middle");
  s += text(f.left - 40, f.top + f.height / 2, "path length [m]", "middle");
  s += text(f.left - 5, f.sy(0) + 4, "0", "end");
  s += text(f.left - 5, f.sy(max_len) + 4, num(max_len), "end");
  s += text(f.left + f.width, f.top + f.height + 16, std::to_string(max_ep), "end");
  return s + "</svg>\n";
}

}  // namespace rrnav
