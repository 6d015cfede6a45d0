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
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace rrnav {

using Rng = std::mt19937_64;

// splitmix64 mix of a base seed with stream identifiers; used to give every
// episode, world and policy its own independent generator.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index = 0);

inline constexpr double kPi = 3.14159265358979323846;

// Wraps an angle into (-pi, pi].
double normalize_angle(double theta);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  friend bool operator==(const Pose&, const Pose&) = default;
};

struct Rect {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;
  friend bool operator==(const Rect&, const Rect&) = default;
};

struct Circle {
  double cx = 0.0;
  double cy = 0.0;
  double r = 0.0;
  friend bool operator==(const Circle&, const Circle&) = default;
};

using Shape = std::variant<Rect, Circle>;

// Euclidean distance from a point to a shape; 0 inside.
double distance_to(const Shape& s, Vec2 p);
// Minimum distance between two shapes; 0 when they overlap.
double distance_between(const Shape& a, const Shape& b);
bool contains(const Shape& s, Vec2 p);
double area(const Shape& s);
// Uniform sample over the shape's area (a zero-radius circle yields its center).
Vec2 sample_point(const Shape& s, Rng& rng);

// Arena spans [-width/2, width/2] x [-height/2, height/2].
struct WorldSpec {
  double width = 0.0;
  double height = 0.0;
  std::vector<Shape> obstacles;
  double robot_radius = 0.0;
  Shape start_region;
  Shape goal_region;
  friend bool operator==(const WorldSpec&, const WorldSpec&) = default;
};

// Throws WorldConfigError describing the first violated invariant.
void validate(const WorldSpec& world);

struct LaserScan {
  std::vector<double> ranges;
  double fov = kPi;
  double max_range = 0.0;

  // Bearing of ray i relative to the robot heading, evaluated as
  // (i - (n-1)/2) * fov/(n-1) so mirrored rays have exactly opposite angles.
  double ray_angle(std::size_t i) const;
};

// Distance along the ray at `ray_angle` (relative to origin.theta) to the first
// obstacle or wall, clamped to (0, max_range].
double raycast(const Pose& origin, double ray_angle, double max_range, const WorldSpec& world);

// n_rays must be >= 15 and a multiple of 15.
LaserScan scan(const Pose& pose, std::size_t n_rays, double max_range, const WorldSpec& world);

Pose step_kinematics(const Pose& pose, double v, double omega, double dt);

bool collides(const Pose& pose, const WorldSpec& world);
bool collides(Vec2 center, double radius, const WorldSpec& world);

// world/1 documents.
WorldSpec parse_world(const std::string& text);
std::string serialize_world(const WorldSpec& world);
WorldSpec load_world(const std::filesystem::path& path);
void save_world(const WorldSpec& world, const std::filesystem::path& path);

}  // namespace rrnav
