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
#include <string>
#include <vector>

#include "rrnav/policy.hpp"

namespace rrnav {

// One row of a trajectory CSV (format trajectory/1). Columns, in order:
//   t,x,y,theta,v_exec,omega_exec,v_prior,omega_prior,mu_dv,mu_dw,var_dv,var_dw,
//   epsilon,used_prior_only,reward
// Optional fields are written empty. The executed command is always
//   clip((prior or 0) + (used_prior_only ? 0 : (mu or 0))).
struct TrajectoryRow {
  int t = 0;
  Pose pose;
  Action executed;
  std::optional<Action> prior;
  std::optional<Residual> mu;
  std::optional<Residual> variance;
  std::optional<double> epsilon;
  bool used_prior_only = false;
  double reward = 0.0;
  friend bool operator==(const TrajectoryRow&, const TrajectoryRow&) = default;
};

// Applied residual on this row: executed minus the prior (zero for fallback rows).
Residual applied_residual(const TrajectoryRow& row);

inline constexpr const char* kTrajectoryHeader =
    "t,x,y,theta,v_exec,omega_exec,v_prior,omega_prior,mu_dv,mu_dw,var_dv,var_dw,epsilon,"
    "used_prior_only,reward";

std::string format_trajectory(const std::vector<TrajectoryRow>& rows);
// Throws ParseError (with line number) on malformed input.
std::vector<TrajectoryRow> parse_trajectory(const std::string& text);

}  // namespace rrnav
