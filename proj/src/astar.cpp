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

#include <algorithm>
#include <cmath>
#include <queue>

#include "rrnav/errors.hpp"
#include "rrnav/eval.hpp"

namespace rrnav {

OccupancyGrid::OccupancyGrid(int cols, int rows, double x_min, double y_min, double cell_w,
                             double cell_h)
    : cols_(cols),
      rows_(rows),
      x_min_(x_min),
      y_min_(y_min),
      cell_w_(cell_w),
      cell_h_(cell_h),
      occ_(static_cast<std::size_t>(cols) * static_cast<std::size_t>(rows), 0) {
  if (cols <= 0 || rows <= 0) throw UsageError("grid dimensions must be positive");
}

GridCell OccupancyGrid::cell_of(Vec2 p) const {
  const int c = static_cast<int>(std::floor((p.x - x_min_) / cell_w_));
  const int r = static_cast<int>(std::floor((p.y - y_min_) / cell_h_));
  return {std::clamp(c, 0, cols_ - 1), std::clamp(r, 0, rows_ - 1)};
}

Vec2 OccupancyGrid::center(GridCell c) const {
  return {x_min_ + (c.col + 0.5) * cell_w_, y_min_ + (c.row + 0.5) * cell_h_};
}

std::size_t OccupancyGrid::count_occupied() const {
  return static_cast<std::size_t>(std::count(occ_.begin(), occ_.end(), std::uint8_t{1}));
}

OccupancyGrid rasterize(const WorldSpec& world, int cols, int rows) {
  if (cols <= 0 || rows <= 0) throw UsageError("rasterize: grid dimensions must be positive");
  const double hw = 0.5 * world.width;
  const double hh = 0.5 * world.height;
  const double r = world.robot_radius;
  OccupancyGrid g(cols, rows, -hw, -hh, world.width / cols, world.height / rows);

  // Same predicate as collides(), evaluated only where it can be true.
  for (int row = 0; row < rows; ++row) {
    for (int col = 0; col < cols; ++col) {
      const Vec2 c = g.center({col, row});
      if (c.x - r < -hw || c.x + r > hw || c.y - r < -hh || c.y + r > hh) {
        g.set_occupied({col, row}, true);
      }
    }
  }
  for (const auto& ob : world.obstacles) {
    double x0, y0, x1, y1;
    if (const auto* rect = std::get_if<Rect>(&ob)) {
      x0 = rect->x_min - r; y0 = rect->y_min - r; x1 = rect->x_max + r; y1 = rect->y_max + r;
    } else {
      const auto& c = std::get<Circle>(ob);
      x0 = c.cx - c.r - r; y0 = c.cy - c.r - r; x1 = c.cx + c.r + r; y1 = c.cy + c.r + r;
    }
    const GridCell lo = g.cell_of({x0, y0});
    const GridCell hi = g.cell_of({x1, y1});
    for (int row = lo.row; row <= hi.row; ++row) {
      for (int col = lo.col; col <= hi.col; ++col) {
        if (distance_to(ob, g.center({col, row})) < r) g.set_occupied({col, row}, true);
      }
    }
  }
  return g;
}

double path_cost(const OccupancyGrid& grid, std::int64_t x_steps, std::int64_t y_steps,
                 std::int64_t diag_steps) {
  const double diag = std::hypot(grid.cell_width(), grid.cell_height());
  // On square cells every split of the straight moves must round the same way.
  const double straight =
      grid.cell_width() == grid.cell_height()
          ? static_cast<double>(x_steps + y_steps) * grid.cell_width()
          : static_cast<double>(x_steps) * grid.cell_width() + static_cast<double>(y_steps) * grid.cell_height();
  return straight + static_cast<double>(diag_steps) * diag;
}

GridPath astar_path(const OccupancyGrid& grid, GridCell start, GridCell goal) {
  if (!grid.in_bounds(start) || !grid.in_bounds(goal)) throw UsageError("astar: cell out of bounds");
  if (grid.occupied(start)) throw UsageError("astar: start cell is occupied");
  if (grid.occupied(goal)) throw UsageError("astar: goal cell is occupied");

  const std::size_t n = static_cast<std::size_t>(grid.cols()) * static_cast<std::size_t>(grid.rows());
  struct Counts {
    std::int32_t x = -1, y = 0, d = 0;
  };
  std::vector<Counts> g(n);
  std::vector<std::int32_t> parent(n, -1);
  std::vector<std::uint8_t> closed(n, 0);
  const double cw = grid.cell_width();
  const double ch = grid.cell_height();
  const double diag = std::hypot(cw, ch);
  auto heuristic = [&](GridCell c) {
    const int dx = std::abs(c.col - goal.col);
    const int dy = std::abs(c.row - goal.row);
    const int m = std::min(dx, dy);
    return m * diag + (dx - m) * cw + (dy - m) * ch;
  };
  auto cost = [&](const Counts& k) { return path_cost(grid, k.x, k.y, k.d); };

  struct Node {
    double f;
    double g;
    std::size_t idx;
  };
  // Lowest f first; among equal f prefer deeper nodes.
  auto worse = [](const Node& a, const Node& b) {
    if (a.f != b.f) return a.f > b.f;
    if (a.g != b.g) return a.g < b.g;
    return a.idx > b.idx;
  };
  std::priority_queue<Node, std::vector<Node>, decltype(worse)> open(worse);
  const std::size_t s_idx = grid.index(start);
  const std::size_t goal_idx = grid.index(goal);
  g[s_idx] = {0, 0, 0};
  open.push({heuristic(start), 0.0, s_idx});

  static constexpr int kDc[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int kDr[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  while (!open.empty()) {
    const Node cur = open.top();
    open.pop();
    if (closed[cur.idx]) continue;
    closed[cur.idx] = 1;
    if (cur.idx == goal_idx) break;
    const GridCell c{static_cast<int>(cur.idx % static_cast<std::size_t>(grid.cols())),
                     static_cast<int>(cur.idx / static_cast<std::size_t>(grid.cols()))};
    const Counts base = g[cur.idx];
    for (int k = 0; k < 8; ++k) {
      const GridCell nb{c.col + kDc[k], c.row + kDr[k]};
      if (!grid.in_bounds(nb) || grid.occupied(nb)) continue;
      if (k >= 4 && (grid.occupied({c.col + kDc[k], c.row}) || grid.occupied({c.col, c.row + kDr[k]}))) {
        continue;
      }
      const std::size_t ni = grid.index(nb);
      if (closed[ni]) continue;
      Counts next = base;
      if (k < 2) ++next.x;
      else if (k < 4) ++next.y;
      else ++next.d;
      const double ng = cost(next);
      if (g[ni].x < 0 || ng < cost(g[ni])) {
        g[ni] = next;
        parent[ni] = static_cast<std::int32_t>(cur.idx);
        open.push({ng + heuristic(nb), ng, ni});
      }
    }
  }

  GridPath out;
  if (!closed[goal_idx]) return out;
  out.length = cost(g[goal_idx]);
  for (std::int64_t i = static_cast<std::int64_t>(goal_idx); i >= 0; i = parent[static_cast<std::size_t>(i)]) {
    out.cells.push_back({static_cast<int>(static_cast<std::size_t>(i) % static_cast<std::size_t>(grid.cols())),
                         static_cast<int>(static_cast<std::size_t>(i) / static_cast<std::size_t>(grid.cols()))});
  }
  std::reverse(out.cells.begin(), out.cells.end());
  return out;
}

double astar_shortest(const OccupancyGrid& grid, GridCell start, GridCell goal) {
  return astar_path(grid, start, goal).length;
}

std::optional<GridCell> nearest_free(const OccupancyGrid& grid, GridCell c, int max_radius) {
  if (grid.in_bounds(c) && !grid.occupied(c)) return c;
  const Vec2 origin = grid.center(c);
  std::optional<GridCell> best;
  double best_d = kUnreachable;
  for (int r = 1; r <= max_radius; ++r) {
    for (int dr = -r; dr <= r; ++dr) {
      for (int dc = -r; dc <= r; ++dc) {
        if (std::max(std::abs(dr), std::abs(dc)) != r) continue;
        const GridCell nb{c.col + dc, c.row + dr};
        if (!grid.in_bounds(nb) || grid.occupied(nb)) continue;
        const Vec2 p = grid.center(nb);
        const double d = std::hypot(p.x - origin.x, p.y - origin.y);
        if (d < best_d) {
          best_d = d;
          best = nb;
        }
      }
    }
    if (best) return best;
  }
  return std::nullopt;
}

GridPath shortest_path_between(const OccupancyGrid& grid, Vec2 start, Vec2 goal, double snap_radius) {
  const int radius = static_cast<int>(
      std::ceil(snap_radius / std::min(grid.cell_width(), grid.cell_height())));
  const auto s = nearest_free(grid, grid.cell_of(start), radius);
  const auto t = nearest_free(grid, grid.cell_of(goal), radius);
  if (!s || !t) return {};
  return astar_path(grid, *s, *t);
}

double shortest_between(const OccupancyGrid& grid, Vec2 start, Vec2 goal, double snap_radius) {
  return shortest_path_between(grid, start, goal, snap_radius).length;
}

}  // namespace rrnav
