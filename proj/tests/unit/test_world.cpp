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

#include "common.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "rrnav/errors.hpp"
#include "rrnav/world.hpp"

using namespace rrnav;
using rrnav::testing::open_arena;

TEST_SUITE("world") {

TEST_CASE("raycast hits walls, boxes and discs at analytic distances") {
  WorldSpec w = open_arena();
  CHECK(raycast({0, 0, 0}, 0.0, 20.0, w) == doctest::Approx(5.0).epsilon(1e-12));
  w.obstacles = {Rect{2, -1, 3, 1}};
  CHECK(raycast({0, 0, 0}, 0.0, 20.0, w) == doctest::Approx(2.0).epsilon(1e-12));
  w.obstacles = {Circle{4, 0, 1}};
  CHECK(raycast({0, 0, 0}, 0.0, 20.0, w) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("raycast agrees with 1 mm ray marching on random scenes") {
  CHECK(oracle::raycast_march_worst(1000, 77) <= 2e-3);
}

TEST_CASE("scan geometry") {
  SUBCASE("symmetric in an empty square arena") {
    const LaserScan s = scan({0, 0, 0}, 180, 20.0, open_arena());
    for (std::size_t i = 0; i < 180; ++i) CHECK(std::abs(s.ranges[i] - s.ranges[179 - i]) < 1e-9);
  }
  SUBCASE("an obstacle on the left shortens the left half") {
    WorldSpec w = open_arena();
    w.obstacles = {Circle{0, 1.5, 0.5}};
    const LaserScan s = scan({0, 0, 0}, 180, 20.0, w);
    double right = 1e9, left = 1e9;
    for (std::size_t i = 0; i < 90; ++i) right = std::min(right, s.ranges[i]);
    for (std::size_t i = 90; i < 180; ++i) left = std::min(left, s.ranges[i]);
    CHECK(left < right);
  }
  SUBCASE("ranges clamp at max_range") {
    const LaserScan s = scan({0, 0, 0.3}, 180, 3.0, open_arena(100, 100));
    for (double r : s.ranges) CHECK(r == 3.0);
  }
}

TEST_CASE("unicycle kinematics") {
  auto near = [](Pose a, Pose b) {
    return std::abs(a.x - b.x) < 1e-12 && std::abs(a.y - b.y) < 1e-12 &&
           std::abs(normalize_angle(a.theta - b.theta)) < 1e-12;
  };
  CHECK(near(step_kinematics({0, 0, 0}, 1, 0, 0.1), {0.1, 0, 0}));
  CHECK(near(step_kinematics({0, 0, 0}, 0, kPi, 1), {0, 0, kPi}));
  CHECK(near(step_kinematics({0, 0, kPi / 2}, 2, 0, 0.5), {0, 1, kPi / 2}));
}

TEST_CASE("collision against a disc obstacle") {
  WorldSpec w = open_arena();
  CHECK_FALSE(collides(Pose{0, 0, 0}, w));
  w.obstacles = {Circle{0, 0, 1.0}};
  const double r = w.robot_radius;
  CHECK(collides(Pose{1.0 + r - 0.01, 0, 0}, w));
  CHECK_FALSE(collides(Pose{1.0 + r + 0.01, 0, 0}, w));
}

TEST_CASE("world/1 round trip and validation") {
  WorldSpec w = open_arena(8, 4);
  w.obstacles = {Rect{-0.3, -0.4, 0.2, 0.1}, Circle{1.1, 0.7, 0.35}};
  const WorldSpec back = parse_world(serialize_world(w));
  CHECK(back == w);
  CHECK(serialize_world(back) == serialize_world(w));

  WorldSpec bad = w;
  bad.robot_radius = -1.0;
  CHECK_THROWS_AS(validate(bad), WorldConfigError);
  CHECK_THROWS_AS(parse_world("{\"version\": \"world/2\"}"), ConfigError);
  CHECK_THROWS_AS(parse_world("{not json"), ParseError);
}

TEST_CASE("derived seeds are stable and distinct") {
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 2, 4));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 3));
}

}  // TEST_SUITE
