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

#include <vector>

#include "rrnav/world.hpp"

namespace rrnav {

// Velocity command. The prior emits v in [0, 1] and omega in [-1, 1];
// executed (hybrid, end-to-end, random) commands live in [-1, 1]^2.
struct Action {
  double v = 0.0;
  double omega = 0.0;
  friend bool operator==(const Action&, const Action&) = default;
};

Action clip_executed(Action a);
Action clip_prior(Action a);

struct PriorParams {
  double k_att = 1.0;
  double k_rep = 0.0015;
  double d_influence = 1.5;
  double k_omega = 0.75;
  double v_max = 1.0;
  friend bool operator==(const PriorParams&, const PriorParams&) = default;
};

// Throws ConfigError unless every gain is positive and d_influence <= max_range.
void validate(const PriorParams& p, double max_range);

// Potential-field controller evaluated in the robot frame.
//
// Attraction is a constant-magnitude k_att vector toward the goal. Each ray
// shorter than d_influence pushes back along its own bearing with magnitude
// k_rep * (1/d - 1/d_influence) / d^2. The robot steers toward the bearing of
// the resultant force and slows with its cosine; nothing reverses.
Action prior_command(const LaserScan& scan, double angle_to_goal, double dist_to_goal,
                     const PriorParams& params);

}  // namespace rrnav
