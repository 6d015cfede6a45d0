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
#include <span>
#include <string>
#include <string_view>

#include "rrnav/env.hpp"
#include "rrnav/nn.hpp"
#include "rrnav/td3.hpp"

namespace rrnav {

enum class PolicyMode { PriorOnly, EndToEnd, RRN, SRRN, Random };

const char* to_string(PolicyMode m);
// Accepts prior, end_to_end, rrn, srrn, random.
PolicyMode parse_policy_mode(std::string_view s);
bool needs_actor(PolicyMode m);
ObservationMode actor_observation_mode(PolicyMode m);

struct ResidualEstimate {
  Residual mean{};
  Residual variance{};
  double epsilon = 0.0;  // max(variance), clamped to [0, 1]
  std::size_t n_passes = 0;
};

struct SwitchDecision {
  bool used_prior_only = false;
  double uniform_draw = 0.0;
  double epsilon = 0.0;
};

struct PolicyOptions {
  std::size_t mc_passes = 100;
  // RRN from one dropout-off forward instead of the MC mean.
  bool rrn_single_pass = false;
  // Forces the switch probability; used to check the degenerate cases.
  std::optional<double> epsilon_override;
  friend bool operator==(const PolicyOptions&, const PolicyOptions&) = default;
};

// epsilon = max of the two per-dimension variances, clamped to [0, 1].
double switch_probability(const Residual& variance);
// Falls back to the prior when the uniform draw lands below epsilon.
SwitchDecision decide_switch(double epsilon, double uniform_draw);

ResidualEstimate estimate_residual(const Mlp& actor, std::span<const double> state,
                                   std::size_t n_passes, std::uint64_t seed);

struct SrrnResult {
  Action action;
  ResidualEstimate estimate;
  SwitchDecision decision;
};

// Falls back to the prior with probability epsilon = max(var dv, var domega),
// otherwise executes compose_hybrid(prior, mean residual).
SrrnResult act_srrn(std::span<const double> state, const Mlp& actor, Action prior_action, Rng& rng,
                    const PolicyOptions& options = {});
Action act_rrn(std::span<const double> state, const Mlp& actor, Action prior_action, Rng& rng,
               const PolicyOptions& options = {}, ResidualEstimate* estimate = nullptr);
Action act_prior(const Observation& obs);
Action act_e2e(std::span<const double> state, const Mlp& actor);
Action act_random(Rng& rng);

// What a controller did on one step, in the shape of a trajectory row.
struct Decision {
  Action executed;
  std::optional<Action> prior;     // absent for end-to-end and random
  std::optional<Residual> mu;      // residual mean, or the raw network/random action
  std::optional<Residual> variance;
  std::optional<double> epsilon;
  bool used_prior_only = false;
};

// Binds a mode to its (optional) actor. Throws UsageError when a learned mode
// lacks an actor or the actor's input width does not fit the mode.
class Controller {
 public:
  Controller(PolicyMode mode, const Mlp* actor, PolicyOptions options = {});
  Decision decide(const Observation& obs, Rng& rng) const;
  PolicyMode mode() const { return mode_; }

 private:
  PolicyMode mode_;
  const Mlp* actor_;
  PolicyOptions options_;
};

}  // namespace rrnav
