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

#include "rrnav/env.hpp"

#include <algorithm>
#include <cmath>

#include "rrnav/errors.hpp"

namespace rrnav {
namespace {

constexpr int kMaxSampleAttempts = 1000;

}  // namespace

void validate(const EpisodeConfig& c) {
  if (!(c.d_threshold > 0.0)) throw ConfigError("d_threshold must be positive");
  if (c.max_steps <= 0) throw ConfigError("max_steps must be positive");
  if (!(c.gamma > 0.0 && c.gamma < 1.0)) throw ConfigError("gamma must lie in (0, 1)");
  if (!(c.dt > 0.0)) throw ConfigError("dt must be positive");
}

std::size_t observation_dim(ObservationMode mode) {
  return mode == ObservationMode::Residual ? kResidualObsDim : kEndToEndObsDim;
}

std::vector<double> Observation::flatten() const {
  std::vector<double> out(laser_bins.begin(), laser_bins.end());
  out.reserve(kResidualObsDim);
  out.push_back(angle_to_goal);
  out.push_back(dist_to_goal);
  out.push_back(prev_action.v);
  out.push_back(prev_action.omega);
  if (mode == ObservationMode::Residual) {
    out.push_back(prior_action.v);
    out.push_back(prior_action.omega);
  }
  return out;
}

const char* to_string(Terminal t) {
  switch (t) {
    case Terminal::None: return "none";
    case Terminal::Goal: return "goal";
    case Terminal::Collision: return "collision";
    case Terminal::Timeout: return "timeout";
  }
  return "?";
}

double compute_reward(double d_target, const EpisodeConfig& config) {
  return d_target < config.d_threshold ? 1.0 : 0.0;
}

Observation build_observation(const LaserScan& scan, const Pose& pose, Vec2 goal,
                              Action prev_action, Action prior_action, ObservationMode mode) {
  const std::size_t n = scan.ranges.size();
  if (n == 0 || n % kLaserBins != 0) {
    throw ConfigError("scan of " + std::to_string(n) + " rays cannot be split into 15 bins");
  }
  Observation obs;
  obs.mode = mode;
  const std::size_t per_bin = n / kLaserBins;
  for (std::size_t b = 0; b < kLaserBins; ++b) {
    const auto first = scan.ranges.begin() + static_cast<std::ptrdiff_t>(b * per_bin);
    const double lo = *std::min_element(first, first + static_cast<std::ptrdiff_t>(per_bin));
    obs.laser_bins[b] = lo / scan.max_range;
  }
  const double dx = goal.x - pose.x;
  const double dy = goal.y - pose.y;
  obs.dist_to_goal = std::hypot(dx, dy);
  obs.angle_to_goal = normalize_angle(std::atan2(dy, dx) - pose.theta);
  obs.prev_action = prev_action;
  obs.prior_action = prior_action;
  return obs;
}

double discounted_return(std::span<const double> rewards, double gamma) {
  double total = 0.0;
  double weight = 1.0;
  for (double r : rewards) {
    total += weight * r;
    weight *= gamma;
  }
  return total;
}

Env::Env(WorldSpec world, EpisodeConfig config, SensorConfig sensor, PriorParams prior,
         ObservationMode mode)
    : world_(std::move(world)), config_(config), sensor_(sensor), prior_(prior), mode_(mode) {
  validate(config_);
  validate(prior_, sensor_.max_range);
  if (sensor_.n_rays < kLaserBins || sensor_.n_rays % kLaserBins != 0) {
    throw ConfigError("n_rays must be a positive multiple of 15");
  }
}

double Env::distance_to_goal() const { return std::hypot(goal_.x - pose_.x, goal_.y - pose_.y); }

Observation Env::observe() {
  scan_ = scan(pose_, sensor_.n_rays, sensor_.max_range, world_);
  const double dx = goal_.x - pose_.x;
  const double dy = goal_.y - pose_.y;
  const double angle = normalize_angle(std::atan2(dy, dx) - pose_.theta);
  const Action prior = prior_command(scan_, angle, std::hypot(dx, dy), prior_);
  return build_observation(scan_, pose_, goal_, prev_action_, prior, mode_);
}

Observation Env::reset(std::uint64_t seed) {
  validate(world_);
  Rng rng(seed);
  Vec2 goal;
  int attempt = 0;
  for (; attempt < kMaxSampleAttempts; ++attempt) {
    goal = sample_point(world_.goal_region, rng);
    if (!collides(goal, world_.robot_radius, world_)) break;
  }
  if (attempt == kMaxSampleAttempts) {
    throw WorldConfigError("could not sample a collision-free goal in 1000 attempts");
  }
  return reset(derive_seed(seed, 1), goal);
}

Observation Env::reset(std::uint64_t seed, Vec2 goal) {
  validate(world_);
  Rng rng(seed);
  std::uniform_real_distribution<double> heading(-kPi, kPi);
  for (int attempt = 0; attempt < kMaxSampleAttempts; ++attempt) {
    const Vec2 p = sample_point(world_.start_region, rng);
    const Pose start{p.x, p.y, normalize_angle(heading(rng))};
    if (!collides(start, world_)) return reset_to(start, goal);
  }
  throw WorldConfigError("could not sample a collision-free start in 1000 attempts");
}

Observation Env::reset_to(const Pose& start, Vec2 goal) {
  if (collides(start, world_)) throw WorldConfigError("start pose collides with the world");
  start_ = start;
  pose_ = start;
  goal_ = goal;
  prev_action_ = Action{};
  steps_ = 0;
  active_ = true;
  obs_ = observe();
  return obs_;
}

StepResult Env::step(Action action) {
  if (!active_) throw UsageError("step() called on a finished or unstarted episode");
  const Action exec = clip_executed(action);
  pose_ = step_kinematics(pose_, exec.v, exec.omega, config_.dt);
  ++steps_;
  prev_action_ = exec;

  StepResult r;
  r.info.pose = pose_;
  r.info.d_target = distance_to_goal();
  r.info.executed = exec;
  r.reward = compute_reward(r.info.d_target, config_);
  if (r.reward > 0.0) {
    r.terminal = Terminal::Goal;
  } else if (collides(pose_, world_)) {
    r.terminal = Terminal::Collision;
  } else if (steps_ >= config_.max_steps) {
    r.terminal = Terminal::Timeout;
  }
  active_ = r.terminal == Terminal::None;
  obs_ = observe();
  r.observation = obs_;
  return r;
}

}  // namespace rrnav
