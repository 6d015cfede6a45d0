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

#include "rrnav/td3.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rrnav/errors.hpp"
#include "rrnav/simd.hpp"
#include "text_util.hpp"

namespace rrnav {
namespace {

constexpr std::size_t kActionDim = 2;
constexpr std::uint64_t kInitStream = 0x1001;
constexpr std::uint64_t kTrainStream = 0x1002;
constexpr std::uint64_t kEpisodeStream = 0x1003;

constexpr const char* kLogHeader = "episode,steps,path_length_m,success,return,eval_success,eval_spl";

std::vector<std::size_t> stack_sizes(std::size_t in, const std::vector<std::size_t>& hidden,
                                     std::size_t out) {
  std::vector<std::size_t> s{in};
  s.insert(s.end(), hidden.begin(), hidden.end());
  s.push_back(out);
  return s;
}

// Row-wise [state | action] for critic input.
std::vector<double> concat_rows(std::span<const double> states, std::span<const double> actions,
                                std::size_t batch, std::size_t state_dim) {
  const std::size_t width = state_dim + kActionDim;
  std::vector<double> out(batch * width);
  for (std::size_t b = 0; b < batch; ++b) {
    std::copy_n(states.begin() + static_cast<std::ptrdiff_t>(b * state_dim), state_dim,
                out.begin() + static_cast<std::ptrdiff_t>(b * width));
    std::copy_n(actions.begin() + static_cast<std::ptrdiff_t>(b * kActionDim), kActionDim,
                out.begin() + static_cast<std::ptrdiff_t>(b * width + state_dim));
  }
  return out;
}

double regress(Mlp& critic, AdamState& opt, std::span<const double> inputs, std::size_t batch,
               std::span<const double> targets) {
  const ForwardTrace tr = forward(critic, inputs, batch, DropoutMode::off());
  std::vector<double> upstream(batch);
  double loss = 0.0;
  const double n = static_cast<double>(batch);
  for (std::size_t b = 0; b < batch; ++b) {
    const double err = tr.output[b] - targets[b];
    loss += err * err;
    upstream[b] = 2.0 * err / n;
  }
  const Gradients g = backward(critic, tr, upstream, {.param_grads = true, .input_grads = false});
  adam_step(opt, critic.params(), g.params);
  return loss / n;
}

double params_norm(const Mlp& net) {
  double s = 0.0;
  for (double p : net.params()) s += p * p;
  return std::sqrt(s);
}

}  // namespace

Action compose_hybrid(Action prior, Residual residual) {
  return clip_executed(Action{prior.v + residual[0], prior.omega + residual[1]});
}

ReplayBuffer::ReplayBuffer(std::size_t capacity, std::size_t state_dim)
    : capacity_(capacity),
      state_dim_(state_dim),
      states_(capacity * state_dim),
      actions_(capacity * kActionDim),
      rewards_(capacity),
      next_states_(capacity * state_dim),
      dones_(capacity) {
  if (capacity == 0) throw UsageError("replay buffer capacity must be positive");
}

void ReplayBuffer::push(const Transition& t) {
  if (t.state.size() != state_dim_ || t.next_state.size() != state_dim_) {
    throw UsageError("replay buffer: transition state has the wrong dimension");
  }
  std::copy(t.state.begin(), t.state.end(), states_.begin() + static_cast<std::ptrdiff_t>(cursor_ * state_dim_));
  std::copy(t.next_state.begin(), t.next_state.end(),
            next_states_.begin() + static_cast<std::ptrdiff_t>(cursor_ * state_dim_));
  actions_[cursor_ * kActionDim] = t.policy_action[0];
  actions_[cursor_ * kActionDim + 1] = t.policy_action[1];
  rewards_[cursor_] = t.reward;
  dones_[cursor_] = t.done ? 1.0 : 0.0;
  cursor_ = (cursor_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

Transition ReplayBuffer::at(std::size_t i) const {
  if (i >= size_) throw UsageError("replay buffer index out of range");
  const std::size_t oldest = size_ < capacity_ ? 0 : cursor_;
  const std::size_t k = (oldest + i) % capacity_;
  Transition t;
  t.state.assign(states_.begin() + static_cast<std::ptrdiff_t>(k * state_dim_),
                 states_.begin() + static_cast<std::ptrdiff_t>((k + 1) * state_dim_));
  t.next_state.assign(next_states_.begin() + static_cast<std::ptrdiff_t>(k * state_dim_),
                      next_states_.begin() + static_cast<std::ptrdiff_t>((k + 1) * state_dim_));
  t.policy_action = {actions_[k * kActionDim], actions_[k * kActionDim + 1]};
  t.reward = rewards_[k];
  t.done = dones_[k] != 0.0;
  return t;
}

ReplayBuffer::Batch ReplayBuffer::sample(std::size_t n, Rng& rng) const {
  if (size_ == 0) throw UsageError("cannot sample from an empty replay buffer");
  std::uniform_int_distribution<std::size_t> pick(0, size_ - 1);
  Batch b;
  b.size = n;
  b.states.resize(n * state_dim_);
  b.next_states.resize(n * state_dim_);
  b.actions.resize(n * kActionDim);
  b.rewards.resize(n);
  b.dones.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = pick(rng);
    std::copy_n(states_.begin() + static_cast<std::ptrdiff_t>(k * state_dim_), state_dim_,
                b.states.begin() + static_cast<std::ptrdiff_t>(i * state_dim_));
    std::copy_n(next_states_.begin() + static_cast<std::ptrdiff_t>(k * state_dim_), state_dim_,
                b.next_states.begin() + static_cast<std::ptrdiff_t>(i * state_dim_));
    b.actions[i * kActionDim] = actions_[k * kActionDim];
    b.actions[i * kActionDim + 1] = actions_[k * kActionDim + 1];
    b.rewards[i] = rewards_[k];
    b.dones[i] = dones_[k];
  }
  return b;
}

void validate(const Td3Config& c) {
  if (!(c.gamma > 0.0 && c.gamma < 1.0)) throw ConfigError("td3.gamma must lie in (0, 1)");
  if (!(c.tau >= 0.0 && c.tau <= 1.0)) throw ConfigError("td3.tau must lie in [0, 1]");
  if (c.policy_delay < 1) throw ConfigError("td3.policy_delay must be >= 1");
  if (!(c.smoothing_noise_sigma >= 0.0) || !(c.smoothing_noise_clip > 0.0)) {
    throw ConfigError("td3 smoothing noise sigma must be >= 0 and its clip positive");
  }
  if (!(c.exploration_noise_sigma >= 0.0)) throw ConfigError("td3.exploration_noise_sigma must be >= 0");
  if (c.batch_size == 0 || c.buffer_capacity == 0) throw ConfigError("td3 batch and buffer sizes must be positive");
  if (!(c.actor_lr > 0.0) || !(c.critic_lr > 0.0)) throw ConfigError("td3 learning rates must be positive");
  if (c.total_episodes < 0 || c.eval_every < 1) throw ConfigError("td3 episode counts are invalid");
  if (!(c.dropout_p >= 0.0 && c.dropout_p < 1.0)) throw ConfigError("td3.dropout_p must lie in [0, 1)");
  if (!(c.residual_penalty >= 0.0)) throw ConfigError("td3.residual_penalty must be >= 0");
}

Td3Nets Td3Nets::create(ObservationMode mode, const Td3Config& config, Rng& rng) {
  const std::size_t sd = observation_dim(mode);
  Td3Nets n;
  n.mode = mode;
  n.actor = Mlp::initialized(stack_sizes(sd, config.actor_hidden, kActionDim),
                             OutputActivation::Tanh, config.dropout_p, rng);
  n.critic1 = Mlp::initialized(stack_sizes(sd + kActionDim, config.critic_hidden, 1),
                               OutputActivation::Identity, 0.0, rng);
  n.critic2 = Mlp::initialized(stack_sizes(sd + kActionDim, config.critic_hidden, 1),
                               OutputActivation::Identity, 0.0, rng);
  n.actor_target = n.actor;
  n.critic1_target = n.critic1;
  n.critic2_target = n.critic2;
  n.actor_opt = AdamState(n.actor.params().size(), config.actor_lr);
  n.critic1_opt = AdamState(n.critic1.params().size(), config.critic_lr);
  n.critic2_opt = AdamState(n.critic2.params().size(), config.critic_lr);
  return n;
}

void polyak_update(Mlp& target, const Mlp& live, double tau) {
  if (target.params().size() != live.params().size()) throw UsageError("polyak: shape mismatch");
  simd::polyak(tau, live.params(), target.params());
}

CriticLoss critic_update(const ReplayBuffer::Batch& batch, Td3Nets& nets, const Td3Config& config,
                         Rng& rng) {
  if (batch.size == 0) throw UsageError("critic_update: empty batch");
  const std::size_t n = batch.size;
  const std::size_t sd = nets.actor.input_dim();

  std::vector<double> next_actions =
      forward(nets.actor_target, batch.next_states, n, DropoutMode::off()).output;
  if (config.smoothing_noise_sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, config.smoothing_noise_sigma);
    for (double& a : next_actions) {
      const double e = std::clamp(noise(rng), -config.smoothing_noise_clip, config.smoothing_noise_clip);
      a = std::clamp(a + e, -1.0, 1.0);
    }
  }
  const auto next_in = concat_rows(batch.next_states, next_actions, n, sd);
  const auto q1 = forward(nets.critic1_target, next_in, n, DropoutMode::off()).output;
  const auto q2 = forward(nets.critic2_target, next_in, n, DropoutMode::off()).output;
  std::vector<double> targets(n);
  for (std::size_t b = 0; b < n; ++b) {
    targets[b] = batch.rewards[b] + config.gamma * (1.0 - batch.dones[b]) * std::min(q1[b], q2[b]);
  }

  const auto in = concat_rows(batch.states, batch.actions, n, sd);
  CriticLoss loss;
  loss.critic1 = regress(nets.critic1, nets.critic1_opt, in, n, targets);
  loss.critic2 = regress(nets.critic2, nets.critic2_opt, in, n, targets);
  ++nets.critic_updates;
  return loss;
}

double actor_ascent_step(Mlp& actor, AdamState& opt, std::span<const double> states,
                         std::size_t batch, const ActionGradientFn& objective, DropoutMode mode) {
  const ForwardTrace tr = forward(actor, states, batch, mode);
  std::vector<double> dq(tr.output.size());
  const double mean_q = objective(tr.output, batch, dq);
  const double scale = -1.0 / static_cast<double>(batch);
  for (double& g : dq) g *= scale;
  const Gradients g = backward(actor, tr, dq, {.param_grads = true, .input_grads = false});
  adam_step(opt, actor.params(), g.params);
  return -mean_q;
}

double actor_update(const ReplayBuffer::Batch& batch, Td3Nets& nets, const Td3Config& config,
                    Rng& rng) {
  if (batch.size == 0) throw UsageError("actor_update: empty batch");
  const std::size_t sd = nets.actor.input_dim();
  const Mlp& critic = nets.critic1;
  auto objective = [&](std::span<const double> actions, std::size_t n, std::span<double> dq_da) {
    const auto in = concat_rows(batch.states, actions, n, sd);
    const ForwardTrace tr = forward(critic, in, n, DropoutMode::off());
    const std::vector<double> ones(n, 1.0);
    const Gradients g = backward(critic, tr, ones, {.param_grads = false, .input_grads = true});
    // Only a residual has a natural zero (the prior); end-to-end actions are left alone.
    const double lambda = nets.mode == ObservationMode::Residual ? config.residual_penalty : 0.0;
    double sum = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      const double a0 = actions[b * kActionDim];
      const double a1 = actions[b * kActionDim + 1];
      sum += tr.output[b] - lambda * (a0 * a0 + a1 * a1);
      dq_da[b * kActionDim] = g.input[b * (sd + kActionDim) + sd] - 2.0 * lambda * a0;
      dq_da[b * kActionDim + 1] = g.input[b * (sd + kActionDim) + sd + 1] - 2.0 * lambda * a1;
    }
    return sum / static_cast<double>(n);
  };
  const DropoutMode mode =
      config.dropout_in_training ? DropoutMode::stochastic(rng) : DropoutMode::off();
  const double loss = actor_ascent_step(nets.actor, nets.actor_opt, batch.states, batch.size,
                                        objective, mode);
  polyak_update(nets.actor_target, nets.actor, config.tau);
  polyak_update(nets.critic1_target, nets.critic1, config.tau);
  polyak_update(nets.critic2_target, nets.critic2, config.tau);
  return loss;
}

RolloutStep rollout_step(Env& env, const Mlp& actor, double noise_sigma, Rng& rng,
                         bool random_action) {
  const Observation obs = env.observation();
  RolloutStep out;
  out.transition.state = obs.flatten();
  Residual pa{};
  if (random_action) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    pa = {u(rng), u(rng)};
  } else {
    const auto y = forward(actor, out.transition.state);
    pa = {y[0], y[1]};
    if (noise_sigma > 0.0) {
      std::normal_distribution<double> noise(0.0, noise_sigma);
      pa[0] += noise(rng);
      pa[1] += noise(rng);
    }
  }
  pa = {std::clamp(pa[0], -1.0, 1.0), std::clamp(pa[1], -1.0, 1.0)};
  out.executed = env.mode() == ObservationMode::Residual ? compose_hybrid(obs.prior_action, pa)
                                                         : clip_executed(Action{pa[0], pa[1]});
  out.result = env.step(out.executed);
  out.transition.policy_action = pa;
  out.transition.reward = out.result.reward;
  out.transition.next_state = out.result.observation.flatten();
  out.transition.done =
      out.result.terminal == Terminal::Goal || out.result.terminal == Terminal::Collision;
  return out;
}

std::string format_training_log(const TrainingLog& log) {
  std::string out = std::string(kLogHeader) + "\n";
  for (const auto& r : log.rows) {
    out += std::to_string(r.episode) + "," + std::to_string(r.steps) + "," +
           textio::format_double(r.path_length_m) + "," + (r.success ? "1" : "0") + "," +
           textio::format_double(r.episode_return) + "," +
           (r.eval_success ? textio::format_double(*r.eval_success) : "") + "," +
           (r.eval_spl ? textio::format_double(*r.eval_spl) : "") + "\n";
  }
  return out;
}

TrainingLog parse_training_log(const std::string& text) {
  const auto ls = textio::lines(text);
  if (ls.empty() || ls[0] != kLogHeader) throw ParseError("training log: missing or wrong header", 1);
  TrainingLog log;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    if (ls[i].empty()) continue;
    const std::size_t line = i + 1;
    const auto f = textio::split(ls[i], ',');
    if (f.size() != 7) throw ParseError("training log: expected 7 columns", line);
    TrainingLogRow r;
    r.episode = static_cast<int>(textio::parse_int(f[0], "episode", line));
    r.steps = static_cast<int>(textio::parse_int(f[1], "steps", line));
    r.path_length_m = textio::parse_double(f[2], "path_length_m", line);
    r.success = textio::parse_int(f[3], "success", line) != 0;
    r.episode_return = textio::parse_double(f[4], "return", line);
    r.eval_success = textio::parse_optional(f[5], "eval_success", line);
    r.eval_spl = textio::parse_optional(f[6], "eval_spl", line);
    log.rows.push_back(r);
  }
  return log;
}

TrainResult train(TrainSetup setup) {
  const Td3Config& cfg = setup.td3;
  validate(cfg);
  if (setup.worlds.empty()) throw ConfigError("train: no worlds");
  if (!setup.evaluate) throw UsageError("train: an evaluation callback is required");

  const bool fresh = !setup.resume_nets.has_value();
  TrainResult result;
  if (fresh) {
    Rng init(derive_seed(setup.seed, kInitStream));
    result.nets = Td3Nets::create(setup.mode, cfg, init);
  } else {
    result.nets = std::move(*setup.resume_nets);
    result.nets.actor_opt = AdamState(result.nets.actor.params().size(), cfg.actor_lr);
    result.nets.critic1_opt = AdamState(result.nets.critic1.params().size(), cfg.critic_lr);
    result.nets.critic2_opt = AdamState(result.nets.critic2.params().size(), cfg.critic_lr);
    if (result.nets.actor.input_dim() != observation_dim(setup.mode)) {
      throw UsageError("train: resume networks do not match the observation mode");
    }
  }
  Td3Nets& nets = result.nets;
  Rng rng(derive_seed(setup.seed, kTrainStream, static_cast<std::uint64_t>(setup.resume_episode)));

  std::vector<Env> envs;
  envs.reserve(setup.worlds.size());
  for (const auto& w : setup.worlds) {
    envs.emplace_back(w, setup.env.episode, setup.env.sensor, setup.env.prior, setup.mode);
  }
  ReplayBuffer buffer(cfg.buffer_capacity, observation_dim(setup.mode));
  const std::size_t learn_after = std::max(cfg.batch_size, cfg.warmup_steps);
  std::uniform_int_distribution<std::size_t> pick_world(0, envs.size() - 1);
  std::size_t total_steps = 0;
  CriticLoss last_critic;
  double last_actor = 0.0;

  auto diverged = [&](int episode, int step) {
    std::ostringstream os;
    os << "training diverged: non-finite loss at episode " << episode << " step " << step
       << " {critic1_loss: " << last_critic.critic1 << ", critic2_loss: " << last_critic.critic2
       << ", actor_loss: " << last_actor << ", critic_updates: " << nets.critic_updates
       << ", |actor|: " << params_norm(nets.actor) << ", |critic1|: " << params_norm(nets.critic1)
       << ", |critic2|: " << params_norm(nets.critic2) << ", buffer_size: " << buffer.size()
       << "}";
    throw TrainingDivergence(os.str());
  };

  for (int ep = setup.resume_episode; ep < cfg.total_episodes; ++ep) {
    Env& env = envs[pick_world(rng)];
    env.reset(derive_seed(setup.seed, kEpisodeStream, static_cast<std::uint64_t>(ep)));
    TrainingLogRow row;
    row.episode = ep;
    double discount = 1.0;
    while (true) {
      const bool random = fresh && total_steps < cfg.warmup_steps;
      const Pose before = env.pose();
      RolloutStep st = rollout_step(env, nets.actor, cfg.exploration_noise_sigma, rng, random);
      buffer.push(st.transition);
      ++total_steps;
      ++row.steps;
      row.path_length_m += std::hypot(env.pose().x - before.x, env.pose().y - before.y);
      row.episode_return += discount * st.result.reward;
      discount *= setup.env.episode.gamma;

      if (buffer.size() >= learn_after) {
        const auto batch = buffer.sample(cfg.batch_size, rng);
        last_critic = critic_update(batch, nets, cfg, rng);
        if (!std::isfinite(last_critic.critic1) || !std::isfinite(last_critic.critic2)) {
          diverged(ep, row.steps);
        }
        if (nets.critic_updates % static_cast<std::uint64_t>(cfg.policy_delay) == 0) {
          if (nets.critic_updates > cfg.critic_burn_in) {
            last_actor = actor_update(batch, nets, cfg, rng);
            if (!std::isfinite(last_actor)) diverged(ep, row.steps);
          } else {
            // Targets keep tracking the critics while the actor is held.
            polyak_update(nets.critic1_target, nets.critic1, cfg.tau);
            polyak_update(nets.critic2_target, nets.critic2, cfg.tau);
          }
        }
      }
      if (st.result.terminal != Terminal::None) {
        row.success = st.result.terminal == Terminal::Goal;
        break;
      }
    }
    if ((ep + 1) % cfg.eval_every == 0) {
      const EvalPoint p = setup.evaluate(nets.actor);
      row.eval_success = p.success;
      row.eval_spl = p.spl;
    }
    result.log.rows.push_back(row);
    if ((ep + 1) % cfg.eval_every == 0 && setup.on_checkpoint) {
      setup.on_checkpoint(ep + 1, nets, result.log);
    }
  }
  return result;
}

}  // namespace rrnav
