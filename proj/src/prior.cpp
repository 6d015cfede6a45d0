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

#include "rrnav/prior.hpp"

#include <algorithm>
#include <cmath>

#include "rrnav/errors.hpp"

namespace rrnav {

Action clip_executed(Action a) {
  return {std::clamp(a.v, -1.0, 1.0), std::clamp(a.omega, -1.0, 1.0)};
}

Action clip_prior(Action a) {
  return {std::clamp(a.v, 0.0, 1.0), std::clamp(a.omega, -1.0, 1.0)};
}

void validate(const PriorParams& p, double max_range) {
  if (!(p.k_att > 0.0 && p.k_rep > 0.0 && p.d_influence > 0.0 && p.k_omega > 0.0 &&
        p.v_max > 0.0)) {
    throw ConfigError("prior gains must all be positive");
  }
  if (p.d_influence > max_range) {
    throw ConfigError("prior d_influence exceeds the laser max_range");
  }
}

Action prior_command(const LaserScan& scan, double angle_to_goal, double /*dist_to_goal*/,
                     const PriorParams& params) {
  double fx = params.k_att * std::cos(angle_to_goal);
  double fy = params.k_att * std::sin(angle_to_goal);

  const std::size_t n = scan.ranges.size();
  auto repulsion = [&](std::size_t i, double& rx, double& ry) {
    const double d = scan.ranges[i];
    rx = 0.0;
    ry = 0.0;
    if (d >= params.d_influence) return;
    const double mag = params.k_rep * (1.0 / d - 1.0 / params.d_influence) / (d * d);
    const double a = scan.ray_angle(i);
    rx = -mag * std::cos(a);
    ry = -mag * std::sin(a);
  };
  // Mirrored rays are summed pairwise so a symmetric scan cancels exactly.
  double rep_x = 0.0;
  double rep_y = 0.0;
  for (std::size_t i = 0; i < n / 2; ++i) {
    double ax, ay, bx, by;
    repulsion(i, ax, ay);
    repulsion(n - 1 - i, bx, by);
    rep_x += ax + bx;
    rep_y += ay + by;
  }
  if (n % 2 == 1) {
    double ax, ay;
    repulsion(n / 2, ax, ay);
    rep_x += ax;
    rep_y += ay;
  }
  fx += rep_x;
  fy += rep_y;

  const double bearing = std::atan2(fy, fx);
  Action a;
  a.omega = params.k_omega * bearing;
  a.v = params.v_max * std::max(0.0, std::cos(bearing));
  return clip_prior(a);
}

}  // namespace rrnav
