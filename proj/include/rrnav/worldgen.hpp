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

#pragma once

#include <cstdint>
#include <vector>

#include "rrnav/world.hpp"

namespace rrnav {

// Random cluttered arenas: a start strip on the left, a goal strip on the
// right, and obstacles scattered over the band between them.
struct GeneratorParams {
  double width = 8.0;
  double height = 4.0;
  double robot_radius = 0.2;
  // Fraction of the obstacle band covered by obstacle area, drawn uniformly
  // per world. Overlaps are counted twice, so this is an upper bound.
  double density_min = 0.06;
  double density_max = 0.10;
  double rect_side_min = 0.3;
  double rect_side_max = 0.8;
  double circle_radius_min = 0.15;
  double circle_radius_max = 0.4;
  double circle_fraction = 0.5;
  // Minimum free distance between any two obstacles. Narrow gaps act as
  // potential-field traps, so they are either absent or wide.
  double min_gap = 1.6;
  // Minimum free distance between an obstacle and the arena walls.
  double wall_gap = 1.0;
  // Start and goal regions: boxes centred on y = 0, set back region_inset
  // from the end walls so an idle or aimless robot has room around it.
  double region_depth = 0.6;
  double region_height = 0.8;
  double region_inset = 1.4;
  // Minimum free distance between an obstacle and either region.
  double region_clearance = 1.0;
  // Grid used by the reachability check.
  int check_cols = 400;
  int check_rows = 200;
  friend bool operator==(const GeneratorParams&, const GeneratorParams&) = default;
};

void validate(const GeneratorParams& p);

// Draws one world; resamples unreachable layouts and throws WorldConfigError
// after 100 rejections.
WorldSpec generate_world(const GeneratorParams& params, std::uint64_t seed);

// World i uses derive_seed(seed, stream, i).
std::vector<WorldSpec> generate_worlds(const GeneratorParams& params, std::size_t count,
                                       std::uint64_t seed, std::uint64_t stream = 0);

// True when the centers of the start and goal regions are joined by a path
// on the inflated occupancy grid.
bool regions_connected(const WorldSpec& world, int cols, int rows);

}  // namespace rrnav
