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

#include <algorithm>
#include <cmath>
#include <vector>

#include "common.hpp"
#include "doctest.h"
#include "rrnav/env.hpp"
#include "rrnav/errors.hpp"
#include "rrnav/td3.hpp"

using namespace rrnav;
using rrnav::testing::open_arena;

namespace {

Td3Config small_config() {
  Td3Config c;
  c.actor_hidden = {16, 16};
  c.critic_hidden = {16, 16};
  c.batch_size = 8;
  c.dropout_p = 0.0;
  return c;
}

ReplayBuffer::Batch one_row_batch(std::size_t sd, double reward, bool done) {
  ReplayBuffer::Batch b;
  b.size = 1;
  b.states.assign(sd, 0.3);
  b.next_states.assign(sd, -0.2);
  b.actions = {0.1, -0.4};
  b.rewards = {reward};
  b.dones = {done ? 1.0 : 0.0};
  return b;
}

double q_of(const Mlp& critic, const std::vector<double>& s, double a0, double a1) {
  std::vector<double> in = s;
  in.push_back(a0);
  in.push_back(a1);
  return forward(critic, in)[0];
}

}  // namespace

TEST_SUITE("td3") {

TEST_CASE("hybrid composition clips the sum") {
  CHECK(compose_hybrid({0.8, 0.2}, {0.5, 0.0}) == Action{1.0, 0.2});
  CHECK(compose_hybrid({0.3, -0.7}, {0.0, 0.0}) == Action{0.3, -0.7});
  CHECK(compose_hybrid({0.5, 1.0}, {-1.0, -1.0}) == Action{-0.5, 0.0});
}

TEST_CASE("rollout step contracts") {
  Env env(open_arena(), {}, {}, {}, ObservationMode::Residual);
  const Mlp zero({21, 8, 2}, OutputActivation::Tanh, 0.0);

  SUBCASE("zero actor without noise executes the prior") {
    env.reset(3);
    Rng rng(1);
    const Action prior = env.prior_action();
    const RolloutStep st = rollout_step(env, zero, 0.0, rng);
    CHECK(st.executed == prior);
  }
  SUBCASE("noise-free rollouts repeat per seed") {
    Rng init(2);
    const Mlp actor = Mlp::initialized({21, 8, 2}, OutputActivation::Tanh, 0.0, init);
    std::vector<Pose> a, b;
    for (auto* out : {&a, &b}) {
      env.reset(4);
      Rng rng(9);
      for (int i = 0; i < 30 && env.active(); ++i) out->push_back(rollout_step(env, actor, 0.0, rng).result.info.pose);
    }
    CHECK(a == b);
  }
  SUBCASE("stored actions stay in range under huge noise") {
    env.reset(5);
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
      if (!env.active()) env.reset(100 + i);
      const RolloutStep st = rollout_step(env, zero, 50.0, rng);
      for (double a : st.transition.policy_action) {
        CHECK(a >= -1.0);
        CHECK(a <= 1.0);
      }
      CHECK(std::abs(st.executed.v) <= 1.0);
      CHECK(std::abs(st.executed.omega) <= 1.0);
      CHECK(st.transition.done == (st.result.terminal == Terminal::Goal ||
                                   st.result.terminal == Terminal::Collision));
    }
  }
}

TEST_CASE("critic targets") {
  Td3Config cfg = small_config();
  cfg.smoothing_noise_sigma = 0.0;
  Rng init(11);
  Td3Nets nets = Td3Nets::create(ObservationMode::EndToEnd, cfg, init);
  const std::size_t sd = 19;

  SUBCASE("terminal transitions regress to the reward alone") {
    for (double& p : nets.critic1_target.params()) p = 5.0;
    for (double& p : nets.critic2_target.params()) p = 7.0;
    const auto batch = one_row_batch(sd, 0.7, true);
    const double q = q_of(nets.critic1, batch.states, 0.1, -0.4);
    Rng rng(1);
    const CriticLoss loss = critic_update(batch, nets, cfg, rng);
    CHECK(loss.critic1 == doctest::Approx((q - 0.7) * (q - 0.7)).epsilon(1e-12));
  }
  SUBCASE("identical twin targets reduce to the first one") {
    nets.critic2_target = nets.critic1_target;
    const auto batch = one_row_batch(sd, 0.0, false);
    const auto a_next = forward(nets.actor_target, batch.next_states);
    const double y = cfg.gamma * q_of(nets.critic1_target, batch.next_states, a_next[0], a_next[1]);
    const double q = q_of(nets.critic1, batch.states, 0.1, -0.4);
    Rng rng(1);
    const CriticLoss loss = critic_update(batch, nets, cfg, rng);
    CHECK(loss.critic1 == doctest::Approx((q - y) * (q - y)).epsilon(1e-9));
  }
  SUBCASE("one rewarded terminal transition is fitted") {
    const auto batch = one_row_batch(sd, 1.0, true);
    Rng rng(1);
    for (int i = 0; i < 500; ++i) critic_update(batch, nets, cfg, rng);
    CHECK(std::abs(q_of(nets.critic1, batch.states, 0.1, -0.4) - 1.0) < 0.05);
  }
}

TEST_CASE("polyak extremes") {
  Rng rng(12);
  const Mlp live = Mlp::initialized({3, 4, 1}, OutputActivation::Identity, 0.0, rng);
  Mlp target = Mlp::initialized({3, 4, 1}, OutputActivation::Identity, 0.0, rng);
  const std::vector<double> before(target.params().begin(), target.params().end());
  polyak_update(target, live, 0.0);
  CHECK(std::equal(before.begin(), before.end(), target.params().begin()));
  polyak_update(target, live, 1.0);
  CHECK(std::equal(live.params().begin(), live.params().end(), target.params().begin()));
}

TEST_CASE("actor ascent converges on a bandit critic") {
  // Q(s, a) = -(a0 - 0.3)^2 - (a1 + 0.5)^2 for every state.
  Rng rng(13);
  Mlp actor = Mlp::initialized({4, 16, 2}, OutputActivation::Tanh, 0.0, rng);
  AdamState opt(actor.params().size(), 1e-3);
  std::vector<double> states(32 * 4);
  std::normal_distribution<double> g(0.0, 1.0);
  for (double& s : states) s = g(rng);
  auto objective = [](std::span<const double> a, std::size_t n, std::span<double> dq) {
    double sum = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      const double d0 = a[b * 2] - 0.3;
      const double d1 = a[b * 2 + 1] + 0.5;
      sum += -(d0 * d0) - d1 * d1;
      dq[b * 2] = -2.0 * d0;
      dq[b * 2 + 1] = -2.0 * d1;
    }
    return sum / static_cast<double>(n);
  };
  for (int i = 0; i < 2000; ++i) actor_ascent_step(actor, opt, states, 32, objective, DropoutMode::off());
  const auto out = forward(actor, states, 32, DropoutMode::off()).output;
  for (std::size_t b = 0; b < 32; ++b) {
    CHECK(std::abs(out[b * 2] - 0.3) < 0.02);
    CHECK(std::abs(out[b * 2 + 1] + 0.5) < 0.02);
  }
}

TEST_CASE("replay buffer keeps FIFO order when it wraps") {
  ReplayBuffer buf(3, 2);
  for (int i = 0; i < 5; ++i) {
    Transition t;
    t.state = {double(i), 0};
    t.next_state = {double(i), 1};
    t.reward = i;
    buf.push(t);
  }
  CHECK(buf.size() == 3);
  CHECK(buf.at(0).reward == 2);
  CHECK(buf.at(1).reward == 3);
  CHECK(buf.at(2).reward == 4);
  CHECK_THROWS_AS(buf.at(3), UsageError);
  Rng rng(1);
  const auto b = buf.sample(10, rng);
  for (double r : b.rewards) CHECK((r >= 2 && r <= 4));
}

TEST_CASE("training log round trip") {
  TrainingLog log;
  log.rows.push_back({0, 12, 1.25, true, 0.89, std::nullopt, std::nullopt});
  log.rows.push_back({1, 300, 0.0, false, 0.0, 0.5, 0.4321});
  const std::string text = format_training_log(log);
  CHECK(text.rfind("episode,steps,path_length_m,success,return,eval_success,eval_spl\n", 0) == 0);
  CHECK(parse_training_log(text).rows == log.rows);
  CHECK_THROWS_AS(parse_training_log("episode,steps\n1,2\n"), ParseError);
}

TEST_CASE("training loop") {
  Td3Config cfg = small_config();
  cfg.total_episodes = 12;
  cfg.warmup_steps = 200;
  cfg.eval_every = 4;
  TrainSetup setup;
  setup.worlds = {open_arena(8, 4)};
  setup.td3 = cfg;
  setup.seed = 21;
  int evals = 0;
  setup.evaluate = [&](const Mlp&) {
    ++evals;
    return EvalPoint{0.5, 0.25};
  };

  const TrainResult a = train(setup);
  CHECK(evals == 3);
  REQUIRE(a.log.rows.size() == 12);
  for (const auto& r : a.log.rows) CHECK(r.eval_success.has_value() == ((r.episode + 1) % 4 == 0));

  SUBCASE("is deterministic per seed") {
    const TrainResult b = train(setup);
    CHECK(format_training_log(a.log) == format_training_log(b.log));
    CHECK(std::equal(a.nets.actor.params().begin(), a.nets.actor.params().end(),
                     b.nets.actor.params().begin()));
  }
  SUBCASE("random end-to-end actions with no learning almost never reach the goal") {
    Td3Config r = cfg;
    r.warmup_steps = 1u << 30;
    r.total_episodes = 30;
    TrainSetup s = setup;
    s.td3 = r;
    s.mode = ObservationMode::EndToEnd;
    const TrainResult res = train(s);
    int wins = 0;
    for (const auto& row : res.log.rows) wins += row.success;
    CHECK(wins <= 3);
  }
}

}  // TEST_SUITE
