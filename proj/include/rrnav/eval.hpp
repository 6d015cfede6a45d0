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
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rrnav/env.hpp"
#include "rrnav/policy.hpp"
#include "rrnav/trajectory.hpp"
#include "rrnav/world.hpp"

namespace rrnav {

struct GridCell {
  int col = 0;
  int row = 0;
  friend bool operator==(const GridCell&, const GridCell&) = default;
};

// Arena raster; a cell is occupied when a robot disc centred on it would collide.
class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(int cols, int rows, double x_min, double y_min, double cell_w, double cell_h);

  int cols() const { return cols_; }
  int rows() const { return rows_; }
  double cell_width() const { return cell_w_; }
  double cell_height() const { return cell_h_; }
  bool in_bounds(GridCell c) const {
    return c.col >= 0 && c.row >= 0 && c.col < cols_ && c.row < rows_;
  }
  bool occupied(GridCell c) const { return occ_[index(c)] != 0; }
  void set_occupied(GridCell c, bool v) { occ_[index(c)] = v ? 1 : 0; }
  std::size_t index(GridCell c) const {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(c.col);
  }
  // Clamped to the grid.
  GridCell cell_of(Vec2 p) const;
  Vec2 center(GridCell c) const;
  std::size_t count_occupied() const;

 private:
  int cols_ = 0;
  int rows_ = 0;
  double x_min_ = 0.0;
  double y_min_ = 0.0;
  double cell_w_ = 0.0;
  double cell_h_ = 0.0;
  std::vector<std::uint8_t> occ_;
};

OccupancyGrid rasterize(const WorldSpec& world, int cols, int rows);

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

struct GridPath {
  double length = kUnreachable;  // meters
  std::vector<GridCell> cells;   // start..goal, empty when unreachable
};

// 8-connected A* with the octile heuristic; diagonal moves may not cut
// occupied corners. Throws UsageError if start or goal is occupied.
GridPath astar_path(const OccupancyGrid& grid, GridCell start, GridCell goal);
double astar_shortest(const OccupancyGrid& grid, GridCell start, GridCell goal);

// Path cost in meters for a move-count decomposition; every search reports
// lengths through this so equal paths compare exactly.
double path_cost(const OccupancyGrid& grid, std::int64_t x_steps, std::int64_t y_steps,
                 std::int64_t diag_steps);

std::optional<GridCell> nearest_free(const OccupancyGrid& grid, GridCell c, int max_radius);

// Shortest grid path between two world points, snapping each to the nearest
// free cell within `snap_radius` meters. Returns kUnreachable on failure.
double shortest_between(const OccupancyGrid& grid, Vec2 start, Vec2 goal, double snap_radius);
GridPath shortest_path_between(const OccupancyGrid& grid, Vec2 start, Vec2 goal, double snap_radius);

struct EpisodeMetrics {
  bool success = false;
  double path_length = 0.0;
  double shortest_length = 0.0;
  int actuation_time = 0;
  double spl_term = 0.0;
  double total_reward = 0.0;
  Terminal terminal = Terminal::None;
};

// success * shortest / max(path, shortest)
double spl_term(bool success, double shortest_length, double path_length);

// Mean SPL term; episodes with a zero or infinite shortest length are skipped
// with a warning on std::clog.
double compute_spl(std::span<const EpisodeMetrics> episodes);

enum class Scenario { GoalGen, EnvGen };
const char* to_string(Scenario s);
Scenario parse_scenario(std::string_view s);

struct EvalConfig {
  int goal_gen_goals = 15;
  int episodes_per_goal = 10;
  int env_gen_worlds = 15;
  int episodes_per_world = 10;
  int grid_cols = 2000;
  int grid_rows = 1000;
  friend bool operator==(const EvalConfig&, const EvalConfig&) = default;
};

struct EpisodeSpec {
  std::size_t world_index = 0;
  Pose start;
  Vec2 goal;
  double shortest_length = kUnreachable;
  std::uint64_t policy_seed = 0;
};

struct EvalSuite {
  std::string name;
  std::uint64_t seed = 0;
  std::vector<WorldSpec> worlds;
  std::vector<EpisodeSpec> episodes;
};

// goal_gen: training worlds with goals drawn from a held-out stream.
// env_gen: held-out worlds.
EvalSuite build_suite(Scenario scenario, const std::vector<WorldSpec>& train_worlds,
                      const std::vector<WorldSpec>& heldout_worlds, const EvalConfig& config,
                      const EnvSetup& setup, std::uint64_t seed);
// Episodes drawn from the training distribution; used for evaluation during training.
EvalSuite build_training_suite(const std::vector<WorldSpec>& worlds, int n_episodes,
                               const EvalConfig& config, const EnvSetup& setup, std::uint64_t seed);

struct EpisodeResult {
  EpisodeMetrics metrics;
  std::vector<TrajectoryRow> rows;
};

EpisodeResult run_episode(const WorldSpec& world, const EpisodeSpec& spec, const EnvSetup& setup,
                          const Controller& controller, bool record_rows);

std::vector<EpisodeMetrics> run_suite(const EvalSuite& suite, const EnvSetup& setup,
                                      const Controller& controller);

struct MetricsRow {
  PolicyMode mode = PolicyMode::PriorOnly;
  Scenario scenario = Scenario::GoalGen;
  double success_rate = 0.0;
  double spl = 0.0;
  double actuation_time = 0.0;
  double success_se = 0.0;
  double spl_se = 0.0;
  std::size_t episodes = 0;
  std::size_t seeds = 0;
};

MetricsRow summarize(PolicyMode mode, Scenario scenario, std::span<const EpisodeMetrics> episodes,
                     std::size_t n_seeds);

struct MetricsTable {
  std::vector<MetricsRow> rows;
};

struct EvalActors {
  const Mlp* residual = nullptr;
  const Mlp* end_to_end = nullptr;
};

// Per-episode metrics behind each table row, keyed by (mode, scenario).
using EvalDetail = std::map<std::pair<PolicyMode, Scenario>, std::vector<EpisodeMetrics>>;

// One row per (mode, scenario); suites are built once per (scenario, seed)
// and shared by all modes.
MetricsTable evaluate(const std::vector<PolicyMode>& modes, const EvalActors& actors,
                      const std::vector<Scenario>& scenarios, const std::vector<std::uint64_t>& seeds,
                      const std::vector<WorldSpec>& train_worlds,
                      const std::vector<WorldSpec>& heldout_worlds, const EvalConfig& config,
                      const EnvSetup& setup, const PolicyOptions& options,
                      EvalDetail* detail = nullptr);

// report/1 JSON document.
std::string format_report(const MetricsTable& table);
// Fixed-width text table, one line per (mode, scenario).
std::string format_report_text(const MetricsTable& table);

}  // namespace rrnav
