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

#include <cmath>
#include <vector>

#include "common.hpp"
#include "doctest.h"
#include "rrnav/env.hpp"
#include "rrnav/errors.hpp"
#include "rrnav/policy.hpp"

using namespace rrnav;
using rrnav::testing::open_arena;

namespace {

// Actor whose output is a constant (bias only) regardless of input.
Mlp constant_actor(double dv, double dw, double dropout = 0.0) {
  Mlp net({21, 4, 2}, OutputActivation::Identity, dropout);
  net.bias(1)[0] = dv;
  net.bias(1)[1] = dw;
  return net;
}

Observation some_observation(ObservationMode mode = ObservationMode::Residual) {
  Env env(open_arena(), {}, {}, {}, mode);
  return env.reset(17);
}

}  // namespace

TEST_SUITE("policy") {

TEST_CASE("switch probability and decision") {
  CHECK(switch_probability({0.04, 0.09}) == 0.09);
  CHECK(switch_probability({1.7, 0.0}) == 1.0);
  const SwitchDecision d = decide_switch(0.09, 0.05);
  CHECK(d.used_prior_only);
  CHECK_FALSE(decide_switch(0.09, 0.5).used_prior_only);
  CHECK(decide_switch(1.0, 0.999999).used_prior_only);
  CHECK_FALSE(decide_switch(0.0, 0.0).used_prior_only);
}

TEST_CASE("srrn with a maximal epsilon always returns the prior") {
  const Mlp actor = constant_actor(0.4, -0.3, 0.2);
  const Observation obs = some_observation();
  Rng rng(1);
  PolicyOptions opt;
  opt.epsilon_override = 1.0;
  opt.mc_passes = 10;
  for (int i = 0; i < 200; ++i) {
    const SrrnResult r = act_srrn(obs.flatten(), actor, obs.prior_action, rng, opt);
    CHECK(r.decision.used_prior_only);
    CHECK(r.action == obs.prior_action);
  }
}

TEST_CASE("srrn without dropout is the hybrid action") {
  const Mlp actor = constant_actor(0.2, 0.1);
  const Observation obs = some_observation();
  Rng rng(2);
  const SrrnResult r = act_srrn(obs.flatten(), actor, obs.prior_action, rng);
  CHECK(r.estimate.epsilon == 0.0);
  CHECK_FALSE(r.decision.used_prior_only);
  CHECK(r.action == compose_hybrid(obs.prior_action, {0.2, 0.1}));
}

TEST_CASE("rrn contracts") {
  const Observation obs = some_observation();
  Rng rng(3);
  SUBCASE("zero actor reproduces the prior") {
    const Mlp zero({21, 4, 2}, OutputActivation::Tanh, 0.2);
    CHECK(act_rrn(obs.flatten(), zero, obs.prior_action, rng) == obs.prior_action);
  }
  SUBCASE("residual can cancel the prior") {
    const Mlp actor = constant_actor(-1.0, 0.0);
    CHECK(act_rrn(obs.flatten(), actor, {1.0, 0.0}, rng) == Action{0.0, 0.0});
  }
  SUBCASE("outputs stay in range") {
    Rng init(4);
    Mlp actor = Mlp::initialized({21, 16, 2}, OutputActivation::Tanh, 0.2, init);
    for (double& w : actor.weights(1)) w *= 5000.0;
    for (int i = 0; i < 50; ++i) {
      const Action a = act_rrn(obs.flatten(), actor, {1.0, -1.0}, rng);
      CHECK(std::abs(a.v) <= 1.0);
      CHECK(std::abs(a.omega) <= 1.0);
    }
  }
}

TEST_CASE("baseline controllers") {
  SUBCASE("random actions are centred") {
    Rng rng(5);
    double sv = 0.0, sw = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
      const Action a = act_random(rng);
      sv += a.v;
      sw += a.omega;
    }
    CHECK(std::abs(sv / n) < 0.005);
    CHECK(std::abs(sw / n) < 0.005);
  }
  SUBCASE("end-to-end is deterministic") {
    Rng init(6);
    const Mlp actor = Mlp::initialized({19, 16, 2}, OutputActivation::Tanh, 0.2, init);
    const Observation obs = some_observation(ObservationMode::EndToEnd);
    CHECK(act_e2e(obs.flatten(), actor) == act_e2e(obs.flatten(), actor));
  }
  SUBCASE("prior mode ignores any actor") {
    const Observation obs = some_observation();
    const Mlp actor = constant_actor(0.5, 0.5);
    Rng a(7), b(7);
    CHECK(Controller(PolicyMode::PriorOnly, nullptr).decide(obs, a).executed ==
          Controller(PolicyMode::PriorOnly, &actor).decide(obs, b).executed);
  }
}

TEST_CASE("controller checks the actor shape") {
  const Mlp e2e({19, 4, 2}, OutputActivation::Tanh, 0.0);
  CHECK_THROWS_AS(Controller(PolicyMode::RRN, &e2e), UsageError);
  CHECK_THROWS_AS(Controller(PolicyMode::SRRN, nullptr), UsageError);
  CHECK_NOTHROW(Controller(PolicyMode::EndToEnd, &e2e));
  CHECK_THROWS_AS(parse_policy_mode("greedy"), ConfigError);
}

}  // TEST_SUITE
