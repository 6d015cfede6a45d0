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

#include "rrnav/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rrnav/errors.hpp"

namespace rrnav {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Smallest range a ray may report; keeps ranges strictly positive when the
// origin already sits on or inside an obstacle.
constexpr double kMinRange = 1e-9;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double ray_rect(Vec2 o, Vec2 d, const Rect& r) {
  double t_near = -kInf;
  double t_far = kInf;
  const double lo[2] = {r.x_min, r.y_min};
  const double hi[2] = {r.x_max, r.y_max};
  const double org[2] = {o.x, o.y};
  const double dir[2] = {d.x, d.y};
  for (int k = 0; k < 2; ++k) {
    if (dir[k] == 0.0) {
      if (org[k] < lo[k] || org[k] > hi[k]) return kInf;
      continue;
    }
    double t1 = (lo[k] - org[k]) / dir[k];
    double t2 = (hi[k] - org[k]) / dir[k];
    if (t1 > t2) std::swap(t1, t2);
    t_near = std::max(t_near, t1);
    t_far = std::min(t_far, t2);
  }
  if (t_near > t_far || t_far < 0.0) return kInf;
  return std::max(t_near, 0.0);
}

double ray_circle(Vec2 o, Vec2 d, const Circle& c) {
  const double fx = o.x - c.cx;
  const double fy = o.y - c.cy;
  const double b = fx * d.x + fy * d.y;
  const double cc = fx * fx + fy * fy - c.r * c.r;
  if (cc <= 0.0) return 0.0;
  const double disc = b * b - cc;
  if (disc < 0.0) return kInf;
  const double t = -b - std::sqrt(disc);
  return t >= 0.0 ? t : kInf;
}

double ray_walls(Vec2 o, Vec2 d, double half_w, double half_h) {
  double t = kInf;
  if (d.x > 0.0) t = std::min(t, (half_w - o.x) / d.x);
  if (d.x < 0.0) t = std::min(t, (-half_w - o.x) / d.x);
  if (d.y > 0.0) t = std::min(t, (half_h - o.y) / d.y);
  if (d.y < 0.0) t = std::min(t, (-half_h - o.y) / d.y);
  return std::max(t, 0.0);
}

bool shape_inside_arena(const Shape& s, double half_w, double half_h) {
  if (const auto* r = std::get_if<Rect>(&s)) {
    return r->x_min >= -half_w && r->x_max <= half_w && r->y_min >= -half_h &&
           r->y_max <= half_h;
  }
  const auto& c = std::get<Circle>(s);
  return c.cx - c.r >= -half_w && c.cx + c.r <= half_w && c.cy - c.r >= -half_h &&
         c.cy + c.r <= half_h;
}

bool well_formed(const Shape& s, bool allow_degenerate) {
  if (const auto* r = std::get_if<Rect>(&s)) {
    return allow_degenerate ? (r->x_min <= r->x_max && r->y_min <= r->y_max)
                            : (r->x_min < r->x_max && r->y_min < r->y_max);
  }
  const auto& c = std::get<Circle>(s);
  return allow_degenerate ? c.r >= 0.0 : c.r > 0.0;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(base) ^ stream) ^ index);
}

double normalize_angle(double theta) {
  double a = std::remainder(theta, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

double distance_to(const Shape& s, Vec2 p) {
  if (const auto* r = std::get_if<Rect>(&s)) {
    const double dx = std::max({r->x_min - p.x, 0.0, p.x - r->x_max});
    const double dy = std::max({r->y_min - p.y, 0.0, p.y - r->y_max});
    return std::hypot(dx, dy);
  }
  const auto& c = std::get<Circle>(s);
  return std::max(0.0, std::hypot(p.x - c.cx, p.y - c.cy) - c.r);
}

double distance_between(const Shape& a, const Shape& b) {
  const auto* ra = std::get_if<Rect>(&a);
  const auto* rb = std::get_if<Rect>(&b);
  if (ra && rb) {
    const double gx = std::max({0.0, ra->x_min - rb->x_max, rb->x_min - ra->x_max});
    const double gy = std::max({0.0, ra->y_min - rb->y_max, rb->y_min - ra->y_max});
    return std::hypot(gx, gy);
  }
  if (ra) {
    const auto& c = std::get<Circle>(b);
    return std::max(0.0, distance_to(a, {c.cx, c.cy}) - c.r);
  }
  const auto& ca = std::get<Circle>(a);
  if (rb) return std::max(0.0, distance_to(b, {ca.cx, ca.cy}) - ca.r);
  const auto& cb = std::get<Circle>(b);
  return std::max(0.0, std::hypot(ca.cx - cb.cx, ca.cy - cb.cy) - ca.r - cb.r);
}

bool contains(const Shape& s, Vec2 p) {
  if (const auto* r = std::get_if<Rect>(&s)) {
    return p.x >= r->x_min && p.x <= r->x_max && p.y >= r->y_min && p.y <= r->y_max;
  }
  const auto& c = std::get<Circle>(s);
  return std::hypot(p.x - c.cx, p.y - c.cy) <= c.r;
}

double area(const Shape& s) {
  if (const auto* r = std::get_if<Rect>(&s)) {
    return (r->x_max - r->x_min) * (r->y_max - r->y_min);
  }
  const auto& c = std::get<Circle>(s);
  return kPi * c.r * c.r;
}

Vec2 sample_point(const Shape& s, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (const auto* r = std::get_if<Rect>(&s)) {
    const double x = r->x_min + (r->x_max - r->x_min) * u(rng);
    const double y = r->y_min + (r->y_max - r->y_min) * u(rng);
    return {x, y};
  }
  const auto& c = std::get<Circle>(s);
  const double rad = c.r * std::sqrt(u(rng));
  const double ang = 2.0 * kPi * u(rng);
  return {c.cx + rad * std::cos(ang), c.cy + rad * std::sin(ang)};
}

void validate(const WorldSpec& w) {
  if (!(w.width > 0.0) || !(w.height > 0.0)) {
    throw WorldConfigError("world width and height must be positive");
  }
  if (!(w.robot_radius > 0.0)) throw WorldConfigError("robot_radius must be positive");
  const double hw = 0.5 * w.width;
  const double hh = 0.5 * w.height;
  for (std::size_t i = 0; i < w.obstacles.size(); ++i) {
    if (!well_formed(w.obstacles[i], false)) {
      throw WorldConfigError("obstacle " + std::to_string(i) + " is degenerate");
    }
    if (!shape_inside_arena(w.obstacles[i], hw, hh)) {
      throw WorldConfigError("obstacle " + std::to_string(i) + " lies outside the arena");
    }
  }
  const std::pair<const char*, const Shape*> regions[] = {{"start_region", &w.start_region},
                                                          {"goal_region", &w.goal_region}};
  for (const auto& [name, region] : regions) {
    if (!well_formed(*region, true)) throw WorldConfigError(std::string(name) + " is malformed");
    if (!shape_inside_arena(*region, hw, hh)) {
      throw WorldConfigError(std::string(name) + " lies outside the arena");
    }
    for (std::size_t i = 0; i < w.obstacles.size(); ++i) {
      if (distance_between(*region, w.obstacles[i]) < w.robot_radius) {
        throw WorldConfigError(std::string(name) + " intersects inflated obstacle " +
                               std::to_string(i));
      }
    }
  }
}

double LaserScan::ray_angle(std::size_t i) const {
  const std::size_t n = ranges.size();
  if (n < 2) return 0.0;
  const double centered = static_cast<double>(i) - 0.5 * static_cast<double>(n - 1);
  return centered * (fov / static_cast<double>(n - 1));
}

double raycast(const Pose& origin, double ray_angle, double max_range, const WorldSpec& world) {
  const double heading = origin.theta + ray_angle;
  const Vec2 o{origin.x, origin.y};
  const Vec2 d{std::cos(heading), std::sin(heading)};
  double t = ray_walls(o, d, 0.5 * world.width, 0.5 * world.height);
  for (const auto& ob : world.obstacles) {
    const double hit = std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Rect>) {
            return ray_rect(o, d, s);
          } else {
            return ray_circle(o, d, s);
          }
        },
        ob);
    t = std::min(t, hit);
  }
  return std::clamp(t, kMinRange, max_range);
}

LaserScan scan(const Pose& pose, std::size_t n_rays, double max_range, const WorldSpec& world) {
  if (n_rays < 15 || n_rays % 15 != 0) {
    throw ConfigError("n_rays must be a positive multiple of 15, got " + std::to_string(n_rays));
  }
  if (!(max_range > 0.0)) throw ConfigError("max_range must be positive");
  LaserScan out;
  out.max_range = max_range;
  out.fov = kPi;
  out.ranges.resize(n_rays);
  for (std::size_t i = 0; i < n_rays; ++i) {
    out.ranges[i] = raycast(pose, out.ray_angle(i), max_range, world);
  }
  return out;
}

Pose step_kinematics(const Pose& pose, double v, double omega, double dt) {
  return Pose{pose.x + v * std::cos(pose.theta) * dt, pose.y + v * std::sin(pose.theta) * dt,
              normalize_angle(pose.theta + omega * dt)};
}

bool collides(Vec2 c, double radius, const WorldSpec& world) {
  const double hw = 0.5 * world.width;
  const double hh = 0.5 * world.height;
  if (c.x - radius < -hw || c.x + radius > hw || c.y - radius < -hh || c.y + radius > hh) {
    return true;
  }
  for (const auto& ob : world.obstacles) {
    if (distance_to(ob, c) < radius) return true;
  }
  return false;
}

bool collides(const Pose& pose, const WorldSpec& world) {
  return collides(Vec2{pose.x, pose.y}, world.robot_radius, world);
}

}  // namespace rrnav
