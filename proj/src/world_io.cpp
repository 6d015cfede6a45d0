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

#include <fstream>
#include <sstream>

#include "json_util.hpp"
#include "rrnav/world.hpp"

namespace rrnav {
namespace {

using jsonio::json;

constexpr const char* kWorldVersion = "world/1";

json shape_to_json(const Shape& s) {
  if (const auto* r = std::get_if<Rect>(&s)) {
    return json{{"type", "rect"}, {"params", {r->x_min, r->y_min, r->x_max, r->y_max}}};
  }
  const auto& c = std::get<Circle>(s);
  return json{{"type", "circle"}, {"params", {c.cx, c.cy, c.r}}};
}

Shape shape_from_json(const json& j, const std::string& where) {
  jsonio::check_keys(j, where, {"type", "params"});
  const auto type = jsonio::get<std::string>(j, where, "type");
  const auto p = jsonio::get<std::vector<double>>(j, where, "params");
  if (type == "rect") {
    if (p.size() != 4) throw ConfigError(where + ": rect needs 4 params");
    return Rect{p[0], p[1], p[2], p[3]};
  }
  if (type == "circle") {
    if (p.size() != 3) throw ConfigError(where + ": circle needs 3 params");
    return Circle{p[0], p[1], p[2]};
  }
  throw ConfigError(where + ": unknown shape type '" + type + "'");
}

}  // namespace

WorldSpec parse_world(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("world: ") + e.what());
  }
  jsonio::check_keys(j, "world",
                     {"version", "width", "height", "robot_radius", "obstacles", "start_region",
                      "goal_region"});
  const auto version = jsonio::get<std::string>(j, "world", "version");
  if (version != kWorldVersion) {
    throw ConfigError("world: unsupported version '" + version + "'");
  }
  WorldSpec w;
  w.width = jsonio::get<double>(j, "world", "width");
  w.height = jsonio::get<double>(j, "world", "height");
  w.robot_radius = jsonio::get<double>(j, "world", "robot_radius");
  if (j.contains("obstacles")) {
    const auto& obs = j.at("obstacles");
    if (!obs.is_array()) throw ConfigError("world.obstacles: expected an array");
    for (std::size_t i = 0; i < obs.size(); ++i) {
      w.obstacles.push_back(shape_from_json(obs[i], "world.obstacles[" + std::to_string(i) + "]"));
    }
  }
  if (!j.contains("start_region") || !j.contains("goal_region")) {
    throw ConfigError("world: start_region and goal_region are required");
  }
  w.start_region = shape_from_json(j.at("start_region"), "world.start_region");
  w.goal_region = shape_from_json(j.at("goal_region"), "world.goal_region");
  validate(w);
  return w;
}

std::string serialize_world(const WorldSpec& w) {
  json obs = json::array();
  for (const auto& o : w.obstacles) obs.push_back(shape_to_json(o));
  json j{{"version", kWorldVersion},
         {"width", w.width},
         {"height", w.height},
         {"robot_radius", w.robot_radius},
         {"obstacles", obs},
         {"start_region", shape_to_json(w.start_region)},
         {"goal_region", shape_to_json(w.goal_region)}};
  return j.dump(2) + "\n";
}

WorldSpec load_world(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open world file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_world(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void save_world(const WorldSpec& w, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write world file " + path.string());
  out << serialize_world(w);
}

}  // namespace rrnav
