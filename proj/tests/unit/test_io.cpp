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

#include <cmath>
#include <string>

#include "common.hpp"
#include "doctest.h"
#include "rrnav/config.hpp"
#include "rrnav/errors.hpp"
#include "rrnav/eval.hpp"
#include "rrnav/plot.hpp"
#include "rrnav/trajectory.hpp"
#include "rrnav/worldgen.hpp"

using namespace rrnav;
using rrnav::testing::open_arena;

TEST_SUITE("io") {

TEST_CASE("config round trip") {
  ExperimentConfig c;
  c.train_worlds.files = {"a.json", "b.json"};
  CHECK(parse_config(serialize_config(c)) == c);

  c.train_worlds = WorldSource{{}, GeneratorParams{}, 3, 42};
  c.train_worlds.generator->density_max = 0.2;
  c.heldout_worlds = WorldSource{{}, GeneratorParams{}, 5, 43};
  c.td3.residual_penalty = 0.1;
  c.td3.actor_hidden = {32, 16};
  c.policy.epsilon_override = 0.25;
  c.eval.modes = {PolicyMode::SRRN, PolicyMode::PriorOnly};
  c.eval.scenarios = {Scenario::EnvGen};
  c.mode = ObservationMode::EndToEnd;
  c.seeds = {4, 5, 6};
  const ExperimentConfig back = parse_config(serialize_config(c));
  CHECK(back == c);
  CHECK(serialize_config(back) == serialize_config(c));
}

TEST_CASE("config rejects bad input") {
  ExperimentConfig c;
  c.train_worlds.files = {"a.json"};
  const std::string good = serialize_config(c);
  auto with = [&](const std::string& from, const std::string& to) {
    std::string s = good;
    s.replace(s.find(from), from.size(), to);
    return s;
  };
  CHECK_THROWS_AS(parse_config(with("\"version\": \"config/1\"", "\"version\": \"config/9\"")), ConfigError);
  CHECK_THROWS_AS(parse_config(with("\"tau\":", "\"taux\":")), ConfigError);
  CHECK_THROWS_AS(parse_config(with("\"max_steps\": 300", "\"max_steps\": -3")), ConfigError);
  CHECK_THROWS_AS(parse_config("{\"version\": \"config/1\"}"), ConfigError);
  CHECK_THROWS_AS(parse_config("{"), ParseError);
}

TEST_CASE("world generation") {
  SUBCASE("zero density gives valid empty worlds") {
    GeneratorParams p;
    p.density_min = p.density_max = 0.0;
    for (const auto& w : generate_worlds(p, 5, 1)) {
      CHECK(w.obstacles.empty());
      CHECK_NOTHROW(validate(w));
    }
  }
  SUBCASE("same seed gives identical files") {
    const auto a = generate_worlds(GeneratorParams{}, 4, 77);
    const auto b = generate_worlds(GeneratorParams{}, 4, 77);
    for (std::size_t i = 0; i < 4; ++i) CHECK(serialize_world(a[i]) == serialize_world(b[i]));
    CHECK(serialize_world(a[0]) != serialize_world(a[1]));
  }
  SUBCASE("every generated world connects its regions") {
    for (const auto& w : generate_worlds(GeneratorParams{}, 30, 5)) {
      const OccupancyGrid g = rasterize(w, 400, 200);
      const auto& s = std::get<Rect>(w.start_region);
      const auto& t = std::get<Rect>(w.goal_region);
      const GridCell a = g.cell_of({0.5 * (s.x_min + s.x_max), 0.5 * (s.y_min + s.y_max)});
      const GridCell b = g.cell_of({0.5 * (t.x_min + t.x_max), 0.5 * (t.y_min + t.y_max)});
      REQUIRE_FALSE(g.occupied(a));
      REQUIRE_FALSE(g.occupied(b));
      CHECK(std::isfinite(astar_shortest(g, a, b)));
    }
  }
  SUBCASE("a world that cannot be connected is reported") {
    GeneratorParams p;
    p.height = 1.2;
    p.region_height = 0.4;
    p.wall_gap = 0.0;
    p.min_gap = 0.0;
    p.circle_fraction = 0.0;
    // Any 1 m box leaves at most 0.2 m above or below it; the robot needs 0.4 m.
    p.rect_side_min = 1.0;
    p.rect_side_max = 1.0;
    p.density_min = p.density_max = 0.5;
    CHECK_THROWS_AS(generate_world(p, 3), WorldConfigError);
  }
}

TEST_CASE("trajectory CSV") {
  std::vector<TrajectoryRow> rows(2);
  rows[0].t = 1;
  rows[0].pose = {0.1, -0.2, 0.3};
  rows[0].executed = {0.5, -0.25};
  rows[0].prior = Action{0.4, 0.1};
  rows[0].mu = Residual{0.1, -0.35};
  rows[0].variance = Residual{0.01, 0.02};
  rows[0].epsilon = 0.02;
  rows[1].t = 2;
  rows[1].executed = {-1.0, 1.0};
  rows[1].reward = 1.0;
  const std::string text = format_trajectory(rows);
  CHECK(text.rfind(std::string(kTrajectoryHeader) + "\n", 0) == 0);
  CHECK(parse_trajectory(text) == rows);

  std::string bad = text;
  bad.replace(bad.rfind("1,1"), 3, "1,x");
  try {
    parse_trajectory(bad);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_trajectory(""), ParseError);
}

TEST_CASE("figures") {
  RolloutMeta meta{open_arena(8, 4), {-3, 0, 0}, {3, 0}, "srrn", 4};
  meta.world.obstacles = {Circle{0, 0.5, 0.4}};
  CHECK(parse_rollout_meta(serialize_rollout_meta(meta)) == meta);

  std::vector<TrajectoryRow> rows;
  for (int t = 1; t <= 20; ++t) {
    TrajectoryRow r;
    r.t = t;
    r.pose = {-3 + 0.3 * t, 0.02 * t, 0.1};
    r.prior = Action{0.8, std::sin(0.5 * t)};
    r.mu = Residual{0.1, -0.3 * std::cos(0.7 * t)};
    r.variance = Residual{0.001 * t, 0.0};
    r.epsilon = 0.001 * t;
    r.used_prior_only = t % 4 == 0;
    const Residual applied = r.used_prior_only ? Residual{0, 0} : *r.mu;
    r.executed = clip_executed({r.prior->v + applied[0], r.prior->omega + applied[1]});
    rows.push_back(r);
  }
  SUBCASE("svg output is deterministic") {
    const OccupancyGrid g = rasterize(meta.world, 200, 100);
    const GridPath p = shortest_path_between(g, {-3, 0}, {3, 0}, 0.05);
    CHECK(trajectory_svg(meta, rows, &p, &g) == trajectory_svg(meta, rows, &p, &g));
    CHECK(components_svg(rows) == components_svg(rows));
    CHECK(trajectory_svg(meta, rows, &p, &g).find("<svg") != std::string::npos);
  }
  SUBCASE("stacked components add up to the executed turn rate") {
    const auto back = parse_trajectory(format_trajectory(rows));
    const auto bars = component_bars(back);
    REQUIRE(bars.size() == back.size());
    for (std::size_t i = 0; i < bars.size(); ++i) {
      CHECK(std::abs(std::abs(bars[i].prior + bars[i].residual) - std::abs(back[i].executed.omega)) < 1e-9);
      if (back[i].used_prior_only) CHECK(bars[i].residual == 0.0);
    }
  }
  SUBCASE("training curves aggregate across seeds") {
    TrainingLog a, b;
    a.rows = {{0, 10, 1.0, true, 0.9, {}, {}}, {1, 10, 3.0, true, 0.9, {}, {}}};
    b.rows = {{0, 10, 2.0, true, 0.9, {}, {}}, {1, 10, 5.0, true, 0.9, {}, {}}};
    const auto pts = curve_points({"res", {a, b}});
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].mean == 1.5);
    CHECK(pts[1].min == 3.0);
    CHECK(pts[1].max == 5.0);
    const std::vector<CurveSeries> s{{"res", {a, b}}};
    CHECK(training_curve_svg(s) == training_curve_svg(s));
  }
}

}  // TEST_SUITE
