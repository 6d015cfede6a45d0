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

#include "rrnav/policy.hpp"

#include <algorithm>
#include <atomic>
#include <iostream>

#include "rrnav/errors.hpp"

namespace rrnav {
namespace {

std::vector<double> flatten_as(const Observation& obs, ObservationMode mode) {
  Observation o = obs;
  o.mode = mode;
  return o.flatten();
}

void warn_degenerate_switch() {
  static std::atomic<bool> warned{false};
  if (!warned.exchange(true)) {
    std::clog << "warning: sRRN actor has dropout_p = 0; the switch never fires and sRRN "
                 "degenerates to RRN\n";
  }
}

}  // namespace

const char* to_string(PolicyMode m) {
  switch (m) {
    case PolicyMode::PriorOnly: return "prior";
    case PolicyMode::EndToEnd: return "end_to_end";
    case PolicyMode::RRN: return "rrn";
    case PolicyMode::SRRN: return "srrn";
    case PolicyMode::Random: return "random";
  }
  return "?";
}

PolicyMode parse_policy_mode(std::string_view s) {
  if (s == "prior") return PolicyMode::PriorOnly;
  if (s == "end_to_end" || s == "e2e") return PolicyMode::EndToEnd;
  if (s == "rrn") return PolicyMode::RRN;
  if (s == "srrn") return PolicyMode::SRRN;
  if (s == "random") return PolicyMode::Random;
  throw ConfigError("unknown policy mode '" + std::string(s) + "'");
}

bool needs_actor(PolicyMode m) {
  return m == PolicyMode::EndToEnd || m == PolicyMode::RRN || m == PolicyMode::SRRN;
}

ObservationMode actor_observation_mode(PolicyMode m) {
  return m == PolicyMode::EndToEnd ? ObservationMode::EndToEnd : ObservationMode::Residual;
}

double switch_probability(const Residual& variance) {
  return std::clamp(std::max(variance[0], variance[1]), 0.0, 1.0);
}

SwitchDecision decide_switch(double epsilon, double uniform_draw) {
  return SwitchDecision{uniform_draw < epsilon, uniform_draw, epsilon};
}

ResidualEstimate estimate_residual(const Mlp& actor, std::span<const double> state,
                                   std::size_t n_passes, std::uint64_t seed) {
  const McStatistics st = mc_statistics(actor, state, n_passes, seed);
  if (st.mean.size() != 2) throw UsageError("residual actor must have 2 outputs");
  ResidualEstimate e;
  e.mean = {st.mean[0], st.mean[1]};
  e.variance = {st.variance[0], st.variance[1]};
  e.epsilon = switch_probability(e.variance);
  e.n_passes = n_passes;
  return e;
}

SrrnResult act_srrn(std::span<const double> state, const Mlp& actor, Action prior_action, Rng& rng,
                    const PolicyOptions& options) {
  if (actor.dropout_p() == 0.0) warn_degenerate_switch();
  SrrnResult out;
  out.estimate = estimate_residual(actor, state, options.mc_passes, rng());
  if (options.epsilon_override) out.estimate.epsilon = std::clamp(*options.epsilon_override, 0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  out.decision = decide_switch(out.estimate.epsilon, u(rng));
  out.action = out.decision.used_prior_only ? prior_action
                                            : compose_hybrid(prior_action, out.estimate.mean);
  return out;
}

Action act_rrn(std::span<const double> state, const Mlp& actor, Action prior_action, Rng& rng,
               const PolicyOptions& options, ResidualEstimate* estimate) {
  ResidualEstimate e;
  if (options.rrn_single_pass) {
    const auto y = forward(actor, state);
    e.mean = {y[0], y[1]};
    e.n_passes = 1;
  } else {
    e = estimate_residual(actor, state, options.mc_passes, rng());
  }
  if (estimate) *estimate = e;
  return compose_hybrid(prior_action, e.mean);
}

Action act_prior(const Observation& obs) { return obs.prior_action; }

Action act_e2e(std::span<const double> state, const Mlp& actor) {
  const auto y = forward(actor, state);
  return clip_executed(Action{y[0], y[1]});
}

Action act_random(Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double v = u(rng);
  return Action{v, u(rng)};
}

Controller::Controller(PolicyMode mode, const Mlp* actor, PolicyOptions options)
    : mode_(mode), actor_(actor), options_(options) {
  if (!needs_actor(mode)) return;
  if (actor == nullptr) {
    throw UsageError(std::string("policy mode '") + to_string(mode) + "' needs a checkpoint");
  }
  const std::size_t want = observation_dim(actor_observation_mode(mode));
  if (actor->input_dim() != want || actor->output_dim() != 2) {
    throw UsageError(std::string("policy mode '") + to_string(mode) + "' expects an actor with " +
                     std::to_string(want) + " inputs and 2 outputs, checkpoint has " +
                     std::to_string(actor->input_dim()) + " inputs");
  }
}

Decision Controller::decide(const Observation& obs, Rng& rng) const {
  Decision d;
  switch (mode_) {
    case PolicyMode::PriorOnly:
      d.prior = obs.prior_action;
      d.executed = act_prior(obs);
      d.used_prior_only = true;
      break;
    case PolicyMode::Random: {
      d.executed = act_random(rng);
      d.mu = Residual{d.executed.v, d.executed.omega};
      break;
    }
    case PolicyMode::EndToEnd: {
      const auto s = flatten_as(obs, ObservationMode::EndToEnd);
      d.executed = act_e2e(s, *actor_);
      d.mu = Residual{d.executed.v, d.executed.omega};
      break;
    }
    case PolicyMode::RRN: {
      const auto s = flatten_as(obs, ObservationMode::Residual);
      ResidualEstimate e;
      d.prior = obs.prior_action;
      d.executed = act_rrn(s, *actor_, obs.prior_action, rng, options_, &e);
      d.mu = e.mean;
      break;
    }
    case PolicyMode::SRRN: {
      const auto s = flatten_as(obs, ObservationMode::Residual);
      const SrrnResult r = act_srrn(s, *actor_, obs.prior_action, rng, options_);
      d.prior = obs.prior_action;
      d.executed = r.action;
      d.mu = r.estimate.mean;
      d.variance = r.estimate.variance;
      d.epsilon = r.estimate.epsilon;
      d.used_prior_only = r.decision.used_prior_only;
      break;
    }
  }
  return d;
}

}  // namespace rrnav
