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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rrnav/eval.hpp"
#include "rrnav/td3.hpp"
#include "rrnav/trajectory.hpp"
#include "rrnav/world.hpp"

namespace rrnav {

// Side information a rollout writes next to its trajectory CSV.
struct RolloutMeta {
  WorldSpec world;
  Pose start;
  Vec2 goal;
  std::string mode;
  std::uint64_t seed = 0;
  friend bool operator==(const RolloutMeta&, const RolloutMeta&) = default;
};

std::string serialize_rollout_meta(const RolloutMeta& meta);
RolloutMeta parse_rollout_meta(const std::string& text);

// Arena, obstacles, the path colored by switch state (prior-only steps in
// purple) and the grid shortest path as a dashed overlay.
std::string trajectory_svg(const RolloutMeta& meta, std::span<const TrajectoryRow> rows,
                           const GridPath* shortest, const OccupancyGrid* grid);

// Angular-velocity split of one step. The residual segment is whatever
// separates the executed command from the prior, so clipping shows up there.
struct ComponentBar {
  int t = 0;
  double prior = 0.0;
  double residual = 0.0;
  double executed = 0.0;
  std::optional<double> epsilon;
};

std::vector<ComponentBar> component_bars(std::span<const TrajectoryRow> rows);
std::string components_svg(std::span<const TrajectoryRow> rows);

struct CurveSeries {
  std::string label;
  std::vector<TrainingLog> runs;  // one per seed
};

// Per-episode mean path length across runs with a min/max band.
struct CurvePoint {
  int episode = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};
std::vector<CurvePoint> curve_points(const CurveSeries& series);
std::string training_curve_svg(std::span<const CurveSeries> series);

}  // namespace rrnav
