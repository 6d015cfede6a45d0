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

#include "rrnav/commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json_util.hpp"
#include "rrnav/checkpoint.hpp"
#include "rrnav/plot.hpp"
#include "text_util.hpp"

namespace rrnav {
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kRolloutPolicyStream = 0x3001;
constexpr double kSnapRadius = 0.05;
constexpr const char* kResumeNets[] = {"actor", "actor_target", "critic1",
                                       "critic2", "critic1_target", "critic2_target"};

fs::path config_dir(const fs::path& config) {
  const fs::path parent = config.parent_path();
  return parent.empty() ? fs::path(".") : parent;
}

Mlp& resume_net(Td3Nets& n, std::size_t i) {
  Mlp* nets[] = {&n.actor, &n.actor_target, &n.critic1, &n.critic2, &n.critic1_target, &n.critic2_target};
  return *nets[i];
}

void save_resume(const fs::path& dir, const Td3Nets& nets, const TrainingLog& log) {
  fs::create_directories(dir);
  auto& mut = const_cast<Td3Nets&>(nets);
  for (std::size_t i = 0; i < std::size(kResumeNets); ++i) {
    write_file(dir / (std::string(kResumeNets[i]) + ".ckpt"), encode_checkpoint(resume_net(mut, i), nets.mode));
  }
  jsonio::json state{{"episodes_done", log.rows.size()}, {"critic_updates", nets.critic_updates}};
  write_file(dir / "state.json", state.dump(2) + "\n");
  write_file(dir / "log.csv", format_training_log(log));
}

struct ResumeState {
  Td3Nets nets;
  TrainingLog log;
};

std::optional<ResumeState> load_resume(const fs::path& dir, ObservationMode mode) {
  if (!fs::exists(dir / "state.json")) return std::nullopt;
  ResumeState r;
  r.nets.mode = mode;
  for (std::size_t i = 0; i < std::size(kResumeNets); ++i) {
    Checkpoint c = load_checkpoint(dir / (std::string(kResumeNets[i]) + ".ckpt"));
    if (c.mode != mode) throw ConfigError("resume checkpoint in " + dir.string() + " has a different mode");
    resume_net(r.nets, i) = std::move(c.net);
  }
  const auto state = jsonio::json::parse(read_file(dir / "state.json"));
  r.nets.critic_updates = state.at("critic_updates").get<std::uint64_t>();
  r.log = parse_training_log(read_file(dir / "log.csv"));
  if (r.log.rows.size() != state.at("episodes_done").get<std::size_t>()) {
    throw ConfigError("resume state in " + dir.string() + " is inconsistent");
  }
  return r;
}

Mlp load_actor(const fs::path& path, ObservationMode want, const char* mode_name) {
  Checkpoint c = load_checkpoint(path);
  if (c.mode != want) {
    throw ConfigError("checkpoint " + path.string() + " was trained in " + to_string(c.mode) + " mode (" +
                      std::to_string(c.net.input_dim()) + "-dim input) but mode " + mode_name + " needs a " +
                      to_string(want) + " checkpoint (" + std::to_string(observation_dim(want)) +
                      "-dim input)");
  }
  return std::move(c.net);
}

}  // namespace

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& content) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  const fs::path tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + p.string());
    out << content;
    if (!out) throw ConfigError("short write to " + p.string());
  }
  fs::rename(tmp, p);
}

GeneratorParams parse_generator_params(const std::string& text) {
  // Reuse the config reader by wrapping the object as a generator source.
  jsonio::json j;
  try {
    j = jsonio::json::parse(text);
  } catch (const jsonio::json::parse_error& e) {
    throw ParseError(std::string("generator params: ") + e.what());
  }
  jsonio::json cfg{{"version", "config/1"},
                   {"train_worlds", {{"generator", j}, {"count", 1}}}};
  return *parse_config(cfg.dump()).train_worlds.generator;
}

std::string serialize_generator_params(const GeneratorParams& p) {
  ExperimentConfig c;
  c.train_worlds.generator = p;
  c.train_worlds.count = 1;
  const auto j = jsonio::json::parse(serialize_config(c));
  return j.at("train_worlds").at("generator").dump(2) + "\n";
}

std::vector<fs::path> cmd_gen_worlds(const GenWorldsOptions& o) {
  if (o.count == 0) throw ConfigError("gen-worlds: count must be positive");
  const GeneratorParams params = o.params ? parse_generator_params(read_file(*o.params)) : GeneratorParams{};
  const auto worlds = generate_worlds(params, o.count, o.seed);
  std::vector<fs::path> out;
  for (std::size_t i = 0; i < worlds.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "world_%03zu.json", i);
    out.push_back(o.out_dir / name);
    write_file(out.back(), serialize_world(worlds[i]));
  }
  return out;
}

fs::path run_directory(const fs::path& out, ObservationMode mode, std::uint64_t seed) {
  return out / to_string(mode) / ("seed_" + std::to_string(seed));
}

void cmd_train(const TrainOptions& o) {
  ExperimentConfig cfg = load_config(o.config);
  if (o.mode) cfg.mode = *o.mode;
  if (o.episodes) cfg.td3.total_episodes = *o.episodes;
  validate(cfg.td3);
  const auto seeds = o.seeds ? *o.seeds : cfg.seeds;
  const fs::path out = o.out_dir ? *o.out_dir : fs::path(cfg.output_dir);
  const auto worlds = resolve_worlds(cfg.train_worlds, config_dir(o.config));
  const EvalSuite suite = build_training_suite(worlds, cfg.eval.train_eval_episodes, cfg.eval.suite, cfg.env,
                                               cfg.eval.train_eval_seed);
  PolicyOptions eval_policy = cfg.policy;
  eval_policy.rrn_single_pass = true;
  eval_policy.epsilon_override.reset();
  const PolicyMode eval_mode = cfg.mode == ObservationMode::Residual ? PolicyMode::RRN : PolicyMode::EndToEnd;

  for (std::uint64_t seed : seeds) {
    const fs::path dir = run_directory(out, cfg.mode, seed);
    fs::create_directories(dir);
    TrainSetup setup;
    setup.worlds = worlds;
    setup.env = cfg.env;
    setup.td3 = cfg.td3;
    setup.mode = cfg.mode;
    setup.seed = seed;
    setup.evaluate = [&](const Mlp& actor) {
      const Controller c(eval_mode, &actor, eval_policy);
      const auto ms = run_suite(suite, cfg.env, c);
      const auto row = summarize(eval_mode, Scenario::GoalGen, ms, 1);
      return EvalPoint{row.success_rate, row.spl};
    };
    TrainingLog prefix;
    if (o.resume) {
      if (auto r = load_resume(dir / "resume", cfg.mode)) {
        prefix = std::move(r->log);
        setup.resume_nets = std::move(r->nets);
        setup.resume_episode = static_cast<int>(prefix.rows.size());
      }
    }
    auto joined = [&](const TrainingLog& log) {
      TrainingLog all = prefix;
      all.rows.insert(all.rows.end(), log.rows.begin(), log.rows.end());
      return all;
    };
    setup.on_checkpoint = [&](int done, const Td3Nets& nets, const TrainingLog& log) {
      save_resume(dir / "resume", nets, joined(log));
      if (!o.quiet) {
        const auto& row = log.rows.back();
        std::cerr << to_string(cfg.mode) << " seed " << seed << " episode " << done << " eval_success "
                  << textio::format_double(row.eval_success.value_or(0.0)) << "\n";
      }
    };
    if (setup.resume_episode >= cfg.td3.total_episodes) {
      if (!o.quiet) std::cerr << "seed " << seed << ": already complete\n";
    }
    TrainResult result = train(std::move(setup));
    write_file(dir / "actor.ckpt", encode_checkpoint(result.nets.actor, cfg.mode));
    write_file(dir / "log.csv", format_training_log(joined(result.log)));
  }
}

std::string cmd_eval(const EvalOptions& o) {
  const ExperimentConfig cfg = load_config(o.config);
  const fs::path base = config_dir(o.config);
  const auto modes = o.modes ? *o.modes : cfg.eval.modes;
  const auto scenarios = o.scenarios ? *o.scenarios : cfg.eval.scenarios;
  const auto seeds = o.seeds ? *o.seeds : cfg.eval.seeds;
  if (modes.empty() || scenarios.empty()) throw UsageError("eval: no modes or scenarios selected");

  std::optional<Mlp> residual, e2e;
  for (PolicyMode m : modes) {
    if (m == PolicyMode::RRN || m == PolicyMode::SRRN) {
      if (!o.residual_checkpoint) {
        throw UsageError(std::string("mode ") + to_string(m) + " needs --checkpoint (a residual checkpoint)");
      }
      if (!residual) residual = load_actor(*o.residual_checkpoint, ObservationMode::Residual, to_string(m));
    }
    if (m == PolicyMode::EndToEnd) {
      if (!o.e2e_checkpoint) throw UsageError("mode end_to_end needs --e2e-checkpoint");
      e2e = load_actor(*o.e2e_checkpoint, ObservationMode::EndToEnd, to_string(m));
    }
  }
  bool need_heldout = false;
  bool need_train = false;
  for (Scenario s : scenarios) (s == Scenario::EnvGen ? need_heldout : need_train) = true;
  const auto train_worlds = need_train ? resolve_worlds(cfg.train_worlds, base) : std::vector<WorldSpec>{};
  std::vector<WorldSpec> heldout;
  if (need_heldout) {
    if (!cfg.heldout_worlds.generator && cfg.heldout_worlds.files.empty()) {
      throw ConfigError("scenario env_gen needs heldout_worlds in the config");
    }
    heldout = resolve_worlds(cfg.heldout_worlds, base);
  }
  EvalActors actors;
  actors.residual = residual ? &*residual : nullptr;
  actors.end_to_end = e2e ? &*e2e : nullptr;
  const MetricsTable table =
      evaluate(modes, actors, scenarios, seeds, train_worlds, heldout, cfg.eval.suite, cfg.env, cfg.policy);
  if (o.out) write_file(*o.out, format_report(table));
  return format_report_text(table);
}

void cmd_rollout(const RolloutOptions& o) {
  const ExperimentConfig cfg = load_config(o.config);
  const WorldSpec world =
      o.world ? load_world(*o.world) : resolve_worlds(cfg.train_worlds, config_dir(o.config)).at(0);
  std::optional<Mlp> actor;
  if (needs_actor(o.mode)) {
    if (!o.checkpoint) throw UsageError(std::string("mode ") + to_string(o.mode) + " needs --checkpoint");
    actor = load_actor(*o.checkpoint, actor_observation_mode(o.mode), to_string(o.mode));
  }
  const Controller controller(o.mode, actor ? &*actor : nullptr, cfg.policy);
  Env env(world, cfg.env.episode, cfg.env.sensor, cfg.env.prior, ObservationMode::Residual);
  env.reset(o.seed);
  EpisodeSpec spec;
  spec.start = env.start();
  spec.goal = env.goal();
  spec.policy_seed = derive_seed(o.seed, kRolloutPolicyStream);
  const EpisodeResult r = run_episode(world, spec, cfg.env, controller, true);
  RolloutMeta meta{world, spec.start, spec.goal, to_string(o.mode), o.seed};
  write_file(o.out, format_trajectory(r.rows));
  write_file(o.out.string() + ".meta.json", serialize_rollout_meta(meta));
}

PlotKind parse_plot_kind(std::string_view s) {
  if (s == "trajectory") return PlotKind::Trajectory;
  if (s == "components") return PlotKind::Components;
  if (s == "training_curve") return PlotKind::TrainingCurve;
  throw UsageError("unknown plot kind '" + std::string(s) + "' (trajectory|components|training_curve)");
}

void cmd_plot(const PlotOptions& o) {
  std::string svg;
  if (o.kind == PlotKind::TrainingCurve) {
    if (o.series.empty()) throw UsageError("training_curve needs at least one --series label=log.csv[,...]");
    std::vector<CurveSeries> series;
    for (const auto& spec : o.series) {
      const auto eq = spec.find('=');
      if (eq == std::string::npos || eq == 0) throw UsageError("bad --series '" + spec + "'");
      CurveSeries s;
      s.label = spec.substr(0, eq);
      const std::string files = spec.substr(eq + 1);
      for (const auto& f : textio::split(files, ',')) {
        try {
          s.runs.push_back(parse_training_log(read_file(fs::path(f))));
        } catch (const ParseError& e) {
          throw ParseError(std::string(f) + ": " + e.what());
        }
      }
      series.push_back(std::move(s));
    }
    svg = training_curve_svg(series);
  } else {
    if (o.inputs.size() != 1) throw UsageError("this plot kind takes exactly one --input CSV");
    const fs::path& in = o.inputs.front();
    std::vector<TrajectoryRow> rows;
    try {
      rows = parse_trajectory(read_file(in));
    } catch (const ParseError& e) {
      throw ParseError(in.string() + ": " + e.what());
    }
    if (rows.empty()) throw ParseError(in.string() + ": trajectory has no rows");
    if (o.kind == PlotKind::Components) {
      svg = components_svg(rows);
    } else {
      const fs::path meta_path = o.meta ? *o.meta : fs::path(in.string() + ".meta.json");
      const RolloutMeta meta = parse_rollout_meta(read_file(meta_path));
      const OccupancyGrid grid = rasterize(meta.world, o.grid_cols, o.grid_rows);
      const GridPath path =
          shortest_path_between(grid, {meta.start.x, meta.start.y}, meta.goal, kSnapRadius);
      svg = trajectory_svg(meta, rows, &path, &grid);
    }
  }
  write_file(o.out, svg);
}

}  // namespace rrnav
