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

#include "rrnav/worldgen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rrnav/errors.hpp"
#include "rrnav/eval.hpp"

namespace rrnav {
namespace {

constexpr int kMaxRejections = 100;
constexpr int kMaxPlacementTries = 2000;

Vec2 region_center(const Shape& s) {
  if (const auto* r = std::get_if<Rect>(&s)) return {(r->x_min + r->x_max) / 2, (r->y_min + r->y_max) / 2};
  const auto& c = std::get<Circle>(s);
  return {c.cx, c.cy};
}

bool inside_arena(const Shape& s, double hw, double hh) {
  if (const auto* r = std::get_if<Rect>(&s)) {
    return r->x_min >= -hw && r->x_max <= hw && r->y_min >= -hh && r->y_max <= hh;
  }
  const auto& c = std::get<Circle>(s);
  return c.cx - c.r >= -hw && c.cx + c.r <= hw && c.cy - c.r >= -hh && c.cy + c.r <= hh;
}

WorldSpec draw_layout(const GeneratorParams& p, Rng& rng) {
  const double hw = p.width / 2;
  const double hh = p.height / 2;
  const double m = p.region_inset;
  const double ry = 0.5 * p.region_height;
  WorldSpec w;
  w.width = p.width;
  w.height = p.height;
  w.robot_radius = p.robot_radius;
  w.start_region = Rect{-hw + m, -ry, -hw + m + p.region_depth, ry};
  w.goal_region = Rect{hw - m - p.region_depth, -ry, hw - m, ry};

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double band_x0 = -hw + m + p.region_depth;
  const double band_x1 = hw - m - p.region_depth;
  const double band_area = (band_x1 - band_x0) * p.height;
  const double density = p.density_min + (p.density_max - p.density_min) * unit(rng);
  const double target = density * band_area;
  // The robot must always fit inside the regions, whatever the setting.
  const double clearance = std::max(p.region_clearance, p.robot_radius * 1.05);

  double covered = 0.0;
  for (int tries = 0; covered < target && tries < kMaxPlacementTries; ++tries) {
    Shape s;
    const double cx = band_x0 + (band_x1 - band_x0) * unit(rng);
    const double cy = -hh + p.height * unit(rng);
    if (unit(rng) < p.circle_fraction) {
      const double r = p.circle_radius_min + (p.circle_radius_max - p.circle_radius_min) * unit(rng);
      s = Circle{cx, cy, r};
    } else {
      const double sx = p.rect_side_min + (p.rect_side_max - p.rect_side_min) * unit(rng);
      const double sy = p.rect_side_min + (p.rect_side_max - p.rect_side_min) * unit(rng);
      s = Rect{cx - sx / 2, cy - sy / 2, cx + sx / 2, cy + sy / 2};
    }
    if (!inside_arena(s, hw - p.wall_gap, hh - p.wall_gap)) continue;
    if (distance_between(s, w.start_region) <= clearance) continue;
    if (distance_between(s, w.goal_region) <= clearance) continue;
    bool crowded = false;
    for (const auto& o : w.obstacles) crowded = crowded || distance_between(s, o) < p.min_gap;
    if (crowded) continue;
    w.obstacles.push_back(s);
    covered += area(s);
  }
  return w;
}

}  // namespace

void validate(const GeneratorParams& p) {
  if (!(p.width > 0.0 && p.height > 0.0)) throw ConfigError("generator: arena must have positive size");
  if (!(p.robot_radius > 0.0)) throw ConfigError("generator: robot_radius must be positive");
  if (!(p.density_min >= 0.0 && p.density_min <= p.density_max && p.density_max < 1.0)) {
    throw ConfigError("generator: need 0 <= density_min <= density_max < 1");
  }
  if (!(p.rect_side_min > 0.0 && p.rect_side_min <= p.rect_side_max)) {
    throw ConfigError("generator: bad rectangle side range");
  }
  if (!(p.circle_radius_min > 0.0 && p.circle_radius_min <= p.circle_radius_max)) {
    throw ConfigError("generator: bad circle radius range");
  }
  if (!(p.circle_fraction >= 0.0 && p.circle_fraction <= 1.0)) {
    throw ConfigError("generator: circle_fraction must lie in [0, 1]");
  }
  if (!(p.region_depth > 0.0) || !(p.region_inset >= p.robot_radius) ||
      2 * (p.region_depth + p.region_inset) >= p.width) {
    throw ConfigError("generator: region_depth and region_inset leave no room for obstacles");
  }
  if (!(p.region_height > 0.0) || p.region_height + 2 * p.robot_radius > p.height) {
    throw ConfigError("generator: region_height must fit inside the arena");
  }
  if (!(p.region_clearance >= 0.0)) throw ConfigError("generator: region_clearance must be non-negative");
  if (!(p.wall_gap >= 0.0)) throw ConfigError("generator: wall_gap must be non-negative");
  if (!(p.min_gap >= 0.0)) throw ConfigError("generator: min_gap must be non-negative");
  if (p.check_cols < 2 || p.check_rows < 2) throw ConfigError("generator: check grid too small");
}

bool regions_connected(const WorldSpec& world, int cols, int rows) {
  const OccupancyGrid grid = rasterize(world, cols, rows);
  const double snap = 2.0 * std::max(grid.cell_width(), grid.cell_height());
  return std::isfinite(
      shortest_between(grid, region_center(world.start_region), region_center(world.goal_region), snap));
}

WorldSpec generate_world(const GeneratorParams& params, std::uint64_t seed) {
  validate(params);
  Rng rng(seed);
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    WorldSpec w = draw_layout(params, rng);
    validate(w);
    if (regions_connected(w, params.check_cols, params.check_rows)) return w;
  }
  throw WorldConfigError("world generator rejected " + std::to_string(kMaxRejections) +
                         " unreachable layouts in a row");
}

std::vector<WorldSpec> generate_worlds(const GeneratorParams& params, std::size_t count,
                                       std::uint64_t seed, std::uint64_t stream) {
  std::vector<WorldSpec> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(generate_world(params, derive_seed(seed, stream, i)));
  return out;
}

}  // namespace rrnav
