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

#include "rrnav/eval.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>

#include "json.hpp"
#include "rrnav/errors.hpp"

namespace rrnav {
namespace {

constexpr std::uint64_t kGoalStream = 0x2001;
constexpr std::uint64_t kStartStream = 0x2002;
constexpr std::uint64_t kPolicyStream = 0x2003;
constexpr std::uint64_t kTrainSuiteStream = 0x2004;
// Start and goal points are snapped to a free cell within this radius.
constexpr double kSnapRadius = 0.05;

struct GridCache {
  const EvalConfig& config;
  std::map<std::size_t, OccupancyGrid> grids;
  const OccupancyGrid& get(std::size_t i, const WorldSpec& w) {
    auto it = grids.find(i);
    if (it == grids.end()) it = grids.emplace(i, rasterize(w, config.grid_cols, config.grid_rows)).first;
    return it->second;
  }
};

Env make_env(const WorldSpec& w, const EnvSetup& setup) {
  return Env(w, setup.episode, setup.sensor, setup.prior, ObservationMode::Residual);
}

EpisodeSpec make_spec(std::size_t world_index, const Env& env, GridCache& cache,
                      const WorldSpec& w, std::uint64_t policy_seed) {
  EpisodeSpec s;
  s.world_index = world_index;
  s.start = env.start();
  s.goal = env.goal();
  s.policy_seed = policy_seed;
  s.shortest_length = shortest_between(cache.get(world_index, w), {s.start.x, s.start.y}, s.goal, kSnapRadius);
  return s;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double standard_error(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
}

}  // namespace

double spl_term(bool success, double shortest_length, double path_length) {
  if (!success) return 0.0;
  return shortest_length / std::max(path_length, shortest_length);
}

double compute_spl(std::span<const EpisodeMetrics> episodes) {
  double sum = 0.0;
  std::size_t used = 0;
  std::size_t skipped = 0;
  for (const auto& e : episodes) {
    if (!(e.shortest_length > 0.0) || !std::isfinite(e.shortest_length)) {
      ++skipped;
      continue;
    }
    sum += e.spl_term;
    ++used;
  }
  if (skipped > 0) {
    std::clog << "warning: SPL skipped " << skipped
              << " episode(s) with zero or unreachable shortest path\n";
  }
  return used == 0 ? 0.0 : sum / static_cast<double>(used);
}

const char* to_string(Scenario s) { return s == Scenario::GoalGen ? "goal_gen" : "env_gen"; }

Scenario parse_scenario(std::string_view s) {
  if (s == "goal_gen") return Scenario::GoalGen;
  if (s == "env_gen") return Scenario::EnvGen;
  throw ConfigError("unknown scenario '" + std::string(s) + "'");
}

EvalSuite build_suite(Scenario scenario, const std::vector<WorldSpec>& train_worlds,
                      const std::vector<WorldSpec>& heldout_worlds, const EvalConfig& config,
                      const EnvSetup& setup, std::uint64_t seed) {
  EvalSuite suite;
  suite.name = to_string(scenario);
  suite.seed = seed;
  GridCache cache{config, {}};
  if (scenario == Scenario::GoalGen) {
    if (train_worlds.empty()) throw ConfigError("goal_gen needs training worlds");
    suite.worlds = train_worlds;
    for (int gi = 0; gi < config.goal_gen_goals; ++gi) {
      const std::size_t wi = static_cast<std::size_t>(gi) % suite.worlds.size();
      Env env = make_env(suite.worlds[wi], setup);
      env.reset(derive_seed(seed, kGoalStream, static_cast<std::uint64_t>(gi)));
      const Vec2 goal = env.goal();
      for (int e = 0; e < config.episodes_per_goal; ++e) {
        const auto k = static_cast<std::uint64_t>(gi * config.episodes_per_goal + e);
        env.reset(derive_seed(seed, kStartStream, k), goal);
        suite.episodes.push_back(make_spec(wi, env, cache, suite.worlds[wi],
                                           derive_seed(seed, kPolicyStream, k)));
      }
    }
  } else {
    if (heldout_worlds.empty()) throw ConfigError("env_gen needs held-out worlds");
    const std::size_t n = std::min<std::size_t>(heldout_worlds.size(),
                                                static_cast<std::size_t>(config.env_gen_worlds));
    suite.worlds.assign(heldout_worlds.begin(), heldout_worlds.begin() + static_cast<std::ptrdiff_t>(n));
    for (std::size_t wi = 0; wi < n; ++wi) {
      Env env = make_env(suite.worlds[wi], setup);
      for (int e = 0; e < config.episodes_per_world; ++e) {
        const auto k = static_cast<std::uint64_t>(wi) * static_cast<std::uint64_t>(config.episodes_per_world) +
                       static_cast<std::uint64_t>(e);
        env.reset(derive_seed(seed, kStartStream, k));
        suite.episodes.push_back(make_spec(wi, env, cache, suite.worlds[wi],
                                           derive_seed(seed, kPolicyStream, k)));
      }
    }
  }
  return suite;
}

EvalSuite build_training_suite(const std::vector<WorldSpec>& worlds, int n_episodes,
                               const EvalConfig& config, const EnvSetup& setup, std::uint64_t seed) {
  if (worlds.empty()) throw ConfigError("training suite needs worlds");
  EvalSuite suite;
  suite.name = "train";
  suite.seed = seed;
  suite.worlds = worlds;
  GridCache cache{config, {}};
  for (int e = 0; e < n_episodes; ++e) {
    const std::size_t wi = static_cast<std::size_t>(e) % worlds.size();
    Env env = make_env(worlds[wi], setup);
    const auto k = static_cast<std::uint64_t>(e);
    env.reset(derive_seed(seed, kTrainSuiteStream, k));
    suite.episodes.push_back(make_spec(wi, env, cache, worlds[wi], derive_seed(seed, kPolicyStream, k)));
  }
  return suite;
}

EpisodeResult run_episode(const WorldSpec& world, const EpisodeSpec& spec, const EnvSetup& setup,
                          const Controller& controller, bool record_rows) {
  Env env = make_env(world, setup);
  env.reset_to(spec.start, spec.goal);
  Rng rng(spec.policy_seed);
  EpisodeResult out;
  auto& m = out.metrics;
  m.shortest_length = spec.shortest_length;
  while (true) {
    const Decision d = controller.decide(env.observation(), rng);
    const Pose before = env.pose();
    const StepResult r = env.step(d.executed);
    m.path_length += std::hypot(r.info.pose.x - before.x, r.info.pose.y - before.y);
    m.total_reward += r.reward;
    if (record_rows) {
      TrajectoryRow row;
      row.t = env.steps();
      row.pose = r.info.pose;
      row.executed = r.info.executed;
      row.prior = d.prior;
      row.mu = d.mu;
      row.variance = d.variance;
      row.epsilon = d.epsilon;
      row.used_prior_only = d.used_prior_only;
      row.reward = r.reward;
      out.rows.push_back(row);
    }
    if (r.terminal != Terminal::None) {
      m.terminal = r.terminal;
      break;
    }
  }
  m.success = m.terminal == Terminal::Goal;
  m.actuation_time = env.steps();
  m.spl_term = spl_term(m.success, m.shortest_length, m.path_length);
  return out;
}

std::vector<EpisodeMetrics> run_suite(const EvalSuite& suite, const EnvSetup& setup,
                                      const Controller& controller) {
  std::vector<EpisodeMetrics> out;
  out.reserve(suite.episodes.size());
  for (const auto& spec : suite.episodes) {
    out.push_back(run_episode(suite.worlds[spec.world_index], spec, setup, controller, false).metrics);
  }
  return out;
}

MetricsRow summarize(PolicyMode mode, Scenario scenario, std::span<const EpisodeMetrics> episodes,
                     std::size_t n_seeds) {
  MetricsRow row;
  row.mode = mode;
  row.scenario = scenario;
  row.episodes = episodes.size();
  row.seeds = n_seeds;
  std::vector<double> success, spl, act;
  for (const auto& e : episodes) {
    success.push_back(e.success ? 1.0 : 0.0);
    act.push_back(e.actuation_time);
    if (e.shortest_length > 0.0 && std::isfinite(e.shortest_length)) spl.push_back(e.spl_term);
  }
  row.success_rate = mean_of(success);
  row.success_se = standard_error(success);
  row.spl = compute_spl(episodes);
  row.spl_se = standard_error(spl);
  row.actuation_time = mean_of(act);
  return row;
}

MetricsTable evaluate(const std::vector<PolicyMode>& modes, const EvalActors& actors,
                      const std::vector<Scenario>& scenarios, const std::vector<std::uint64_t>& seeds,
                      const std::vector<WorldSpec>& train_worlds,
                      const std::vector<WorldSpec>& heldout_worlds, const EvalConfig& config,
                      const EnvSetup& setup, const PolicyOptions& options, EvalDetail* detail) {
  if (seeds.empty()) throw ConfigError("evaluate: no seeds");
  std::vector<Controller> controllers;
  for (PolicyMode m : modes) {
    const Mlp* actor = m == PolicyMode::EndToEnd ? actors.end_to_end
                       : needs_actor(m)          ? actors.residual
                                                 : nullptr;
    controllers.emplace_back(m, actor, options);
  }
  MetricsTable table;
  for (Scenario sc : scenarios) {
    std::vector<std::vector<EpisodeMetrics>> per_mode(modes.size());
    for (std::uint64_t seed : seeds) {
      const EvalSuite suite = build_suite(sc, train_worlds, heldout_worlds, config, setup, seed);
      for (std::size_t i = 0; i < modes.size(); ++i) {
        auto ms = run_suite(suite, setup, controllers[i]);
        per_mode[i].insert(per_mode[i].end(), ms.begin(), ms.end());
      }
    }
    for (std::size_t i = 0; i < modes.size(); ++i) {
      table.rows.push_back(summarize(modes[i], sc, per_mode[i], seeds.size()));
      if (detail) (*detail)[{modes[i], sc}] = std::move(per_mode[i]);
    }
  }
  return table;
}

std::string format_report(const MetricsTable& table) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"mode", to_string(r.mode)},
                    {"scenario", to_string(r.scenario)},
                    {"success_rate", r.success_rate},
                    {"success_se", r.success_se},
                    {"spl", r.spl},
                    {"spl_se", r.spl_se},
                    {"actuation_time", r.actuation_time},
                    {"episodes", r.episodes},
                    {"seeds", r.seeds}});
  }
  nlohmann::ordered_json doc{{"version", "report/1"}, {"rows", rows}};
  return doc.dump(2) + "\n";
}

std::string format_report_text(const MetricsTable& table) {
  std::string out = "mode         scenario   success    SPL        actuation  episodes\n";
  char buf[160];
  for (const auto& r : table.rows) {
    std::snprintf(buf, sizeof(buf), "%-12s %-10s %-10.4f %-10.4f %-10.1f %zu\n", to_string(r.mode),
                  to_string(r.scenario), r.success_rate, r.spl, r.actuation_time, r.episodes);
    out += buf;
  }
  return out;
}

}  // namespace rrnav
