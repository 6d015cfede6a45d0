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

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "rrnav/prior.hpp"
#include "rrnav/world.hpp"

namespace rrnav {

inline constexpr std::size_t kLaserBins = 15;
inline constexpr std::size_t kResidualObsDim = 21;
inline constexpr std::size_t kEndToEndObsDim = 19;

struct EpisodeConfig {
  double d_threshold = 0.2;
  int max_steps = 300;
  double gamma = 0.99;
  double dt = 0.1;
  friend bool operator==(const EpisodeConfig&, const EpisodeConfig&) = default;
};

void validate(const EpisodeConfig& c);

struct SensorConfig {
  std::size_t n_rays = 180;
  double max_range = 5.0;
  friend bool operator==(const SensorConfig&, const SensorConfig&) = default;
};

// Everything an Env needs besides the world.
struct EnvSetup {
  EpisodeConfig episode;
  SensorConfig sensor;
  PriorParams prior;
  friend bool operator==(const EnvSetup&, const EnvSetup&) = default;
};

enum class ObservationMode { Residual, EndToEnd };

std::size_t observation_dim(ObservationMode mode);

struct Observation {
  std::array<double, kLaserBins> laser_bins{};
  double angle_to_goal = 0.0;
  double dist_to_goal = 0.0;
  Action prev_action;
  Action prior_action;
  ObservationMode mode = ObservationMode::Residual;

  // [15 bins, angle, dist, prev_v, prev_omega, prior_v, prior_omega];
  // end-to-end drops the final pair.
  std::vector<double> flatten() const;
  friend bool operator==(const Observation&, const Observation&) = default;
};

enum class Terminal { None, Goal, Collision, Timeout };

const char* to_string(Terminal t);

struct StepInfo {
  Pose pose;
  double d_target = 0.0;
  Action executed;
};

struct StepResult {
  Observation observation;
  double reward = 0.0;
  Terminal terminal = Terminal::None;
  StepInfo info;
};

double compute_reward(double d_target, const EpisodeConfig& config);

Observation build_observation(const LaserScan& scan, const Pose& pose, Vec2 goal,
                              Action prev_action, Action prior_action, ObservationMode mode);

// sum_{tau=1..T} gamma^(tau-1) r_tau
double discounted_return(std::span<const double> rewards, double gamma);

// Point-goal episode over an immutable world. The environment computes the
// prior command for every state so it can be embedded in the observation.
class Env {
 public:
  Env(WorldSpec world, EpisodeConfig config, SensorConfig sensor, PriorParams prior,
      ObservationMode mode);

  // Samples start (pose and heading) and goal from the world's regions.
  // Same seed, same episode. Throws WorldConfigError on blocked regions or
  // when 1000 rejection attempts fail.
  Observation reset(std::uint64_t seed);
  // As above with the goal fixed by the caller; only the start is sampled.
  Observation reset(std::uint64_t seed, Vec2 goal);
  Observation reset_to(const Pose& start, Vec2 goal);

  StepResult step(Action action);

  const WorldSpec& world() const { return world_; }
  const EpisodeConfig& config() const { return config_; }
  const SensorConfig& sensor() const { return sensor_; }
  const PriorParams& prior_params() const { return prior_; }
  ObservationMode mode() const { return mode_; }

  const Pose& pose() const { return pose_; }
  const Pose& start() const { return start_; }
  Vec2 goal() const { return goal_; }
  const LaserScan& last_scan() const { return scan_; }
  const Observation& observation() const { return obs_; }
  Action prior_action() const { return obs_.prior_action; }
  int steps() const { return steps_; }
  bool active() const { return active_; }
  double distance_to_goal() const;

 private:
  Observation observe();

  WorldSpec world_;
  EpisodeConfig config_;
  SensorConfig sensor_;
  PriorParams prior_;
  ObservationMode mode_;

  Pose start_;
  Pose pose_;
  Vec2 goal_;
  Action prev_action_;
  LaserScan scan_;
  Observation obs_;
  int steps_ = 0;
  bool active_ = false;
};

}  // namespace rrnav
