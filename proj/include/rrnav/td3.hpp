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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rrnav/env.hpp"
#include "rrnav/nn.hpp"

namespace rrnav {

using Residual = std::array<double, 2>;

// clip(prior + residual) componentwise to [-1, 1].
Action compose_hybrid(Action prior, Residual residual);

struct Transition {
  std::vector<double> state;
  Residual policy_action{};  // network-side action, before composition with the prior
  double reward = 0.0;
  std::vector<double> next_state;
  bool done = false;  // goal or collision; timeouts keep bootstrapping
};

class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, std::size_t state_dim);

  struct Batch {
    std::size_t size = 0;
    std::vector<double> states;       // size x state_dim
    std::vector<double> actions;      // size x 2
    std::vector<double> rewards;
    std::vector<double> next_states;  // size x state_dim
    std::vector<double> dones;        // 1.0 for terminal transitions
  };

  // Overwrites the oldest transition once full.
  void push(const Transition& t);
  // Uniform with replacement over the current contents.
  Batch sample(std::size_t n, Rng& rng) const;
  // i-th oldest stored transition.
  Transition at(std::size_t i) const;

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t state_dim() const { return state_dim_; }

 private:
  std::size_t capacity_;
  std::size_t state_dim_;
  std::size_t size_ = 0;
  std::size_t cursor_ = 0;
  std::vector<double> states_, actions_, rewards_, next_states_, dones_;
};

struct Td3Config {
  double gamma = 0.99;
  double tau = 0.005;
  int policy_delay = 2;
  double smoothing_noise_sigma = 0.2;
  double smoothing_noise_clip = 0.5;
  double exploration_noise_sigma = 0.1;
  std::size_t batch_size = 256;
  std::size_t buffer_capacity = 200000;
  std::size_t warmup_steps = 1000;
  // Critic updates performed before the first actor update; the actor keeps
  // its near-zero initial output while the critics fit the prior's returns.
  std::size_t critic_burn_in = 0;
  // Weight of a squared-magnitude penalty on the residual inside the actor
  // objective, pulling the hybrid toward the prior wherever the critic has no
  // clear preference. Residual mode only; zero gives plain TD3.
  double residual_penalty = 0.0;
  double actor_lr = 3e-4;
  double critic_lr = 3e-4;
  int total_episodes = 1000;
  int eval_every = 10;
  std::vector<std::size_t> actor_hidden{256, 256};
  std::vector<std::size_t> critic_hidden{256, 256};
  double dropout_p = 0.2;
  // Apply dropout in the actor's forward pass during policy updates.
  bool dropout_in_training = true;
  friend bool operator==(const Td3Config&, const Td3Config&) = default;
};

void validate(const Td3Config& c);

// Actor, twin critics, their targets and optimizers.
struct Td3Nets {
  ObservationMode mode = ObservationMode::Residual;
  Mlp actor, actor_target;
  Mlp critic1, critic2, critic1_target, critic2_target;
  AdamState actor_opt, critic1_opt, critic2_opt;
  std::uint64_t critic_updates = 0;

  static Td3Nets create(ObservationMode mode, const Td3Config& config, Rng& rng);
};

// target = tau * live + (1 - tau) * target
void polyak_update(Mlp& target, const Mlp& live, double tau);

struct CriticLoss {
  double critic1 = 0.0;
  double critic2 = 0.0;
};

// One TD3 critic step on a sampled batch; smoothing noise drawn from rng.
CriticLoss critic_update(const ReplayBuffer::Batch& batch, Td3Nets& nets, const Td3Config& config,
                         Rng& rng);

// Gradient of the objective with respect to the actor's actions: fills
// dq_da (batch x action_dim) for the given actions and returns the mean value.
using ActionGradientFn =
    std::function<double(std::span<const double> actions, std::size_t batch, std::span<double> dq_da)>;

// One Adam ascent step of the actor on mean objective(actor(s)).
// Returns the loss (negated mean objective).
double actor_ascent_step(Mlp& actor, AdamState& opt, std::span<const double> states,
                         std::size_t batch, const ActionGradientFn& objective, DropoutMode mode);

// Deterministic policy gradient step through critic 1, then Polyak update of
// the three target networks.
double actor_update(const ReplayBuffer::Batch& batch, Td3Nets& nets, const Td3Config& config,
                    Rng& rng);

struct RolloutStep {
  Transition transition;
  StepResult result;
  Action executed;
};

// One environment step. Residual: executed = compose_hybrid(prior, clip(actor(s) + noise)).
// End-to-end: executed = clip(actor(s) + noise). With `random_action` the policy
// action is uniform on [-1, 1]^2 instead of the actor's.
RolloutStep rollout_step(Env& env, const Mlp& actor, double noise_sigma, Rng& rng,
                         bool random_action = false);

struct TrainingLogRow {
  int episode = 0;
  int steps = 0;
  double path_length_m = 0.0;
  bool success = false;
  double episode_return = 0.0;
  std::optional<double> eval_success;
  std::optional<double> eval_spl;
  friend bool operator==(const TrainingLogRow&, const TrainingLogRow&) = default;
};

struct TrainingLog {
  std::vector<TrainingLogRow> rows;
};

std::string format_training_log(const TrainingLog& log);
TrainingLog parse_training_log(const std::string& text);

struct EvalPoint {
  double success = 0.0;
  double spl = 0.0;
};

struct TrainSetup {
  std::vector<WorldSpec> worlds;
  EnvSetup env;
  Td3Config td3;
  ObservationMode mode = ObservationMode::Residual;
  std::uint64_t seed = 0;
  // Periodic evaluation of the deterministic policy; required.
  std::function<EvalPoint(const Mlp& actor)> evaluate;
  // Called after every eval_every-th episode with the episode count so far
  // and the log accumulated by this call.
  std::function<void(int episodes_done, const Td3Nets& nets, const TrainingLog& log)> on_checkpoint;
  // Resume state: networks plus episodes already completed. The replay
  // buffer and optimizer moments start fresh.
  std::optional<Td3Nets> resume_nets;
  int resume_episode = 0;
};

struct TrainResult {
  Td3Nets nets;
  TrainingLog log;
};

// Throws TrainingDivergence with a state dump if a loss becomes non-finite.
TrainResult train(TrainSetup setup);

}  // namespace rrnav
