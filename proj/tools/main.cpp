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

// rrnav: world generation, training, evaluation, rollout recording and SVG
// figures from one binary. Every subcommand exits 0 on success and prints a
// single "error: ..." line with a nonzero status otherwise.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rrnav/commands.hpp"
#include "rrnav/errors.hpp"
#include "rrnav/eval.hpp"
#include "rrnav/policy.hpp"

namespace {

using rrnav::PolicyMode;
using rrnav::Scenario;

std::vector<PolicyMode> parse_modes(const std::vector<std::string>& names) {
  std::vector<PolicyMode> out;
  for (const auto& n : names) out.push_back(rrnav::parse_policy_mode(n));
  return out;
}

std::vector<Scenario> parse_scenarios(const std::vector<std::string>& names) {
  std::vector<Scenario> out;
  for (const auto& n : names) out.push_back(rrnav::parse_scenario(n));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Residual reactive navigation: train, evaluate and plot"};
  app.require_subcommand(1);

  rrnav::GenWorldsOptions gen;
  std::string gen_params;
  auto* gen_cmd = app.add_subcommand("gen-worlds", "Generate world/1 files");
  gen_cmd->add_option("--params", gen_params, "GeneratorParams JSON file");
  gen_cmd->add_option("--count", gen.count, "Number of worlds")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out_dir, "Output directory")->required();

  rrnav::TrainOptions train;
  std::vector<std::uint64_t> train_seeds;
  std::string train_mode;
  int train_episodes = -1;
  std::string train_out;
  auto* train_cmd = app.add_subcommand("train", "Train an actor with TD3");
  train_cmd->add_option("--config", train.config, "Experiment config")->required();
  train_cmd->add_option("--seeds", train_seeds, "Seed list (overrides the config)")->delimiter(',');
  train_cmd->add_option("--mode", train_mode, "residual | end_to_end");
  train_cmd->add_option("--episodes", train_episodes, "Episode budget (overrides the config)");
  train_cmd->add_option("--out", train_out, "Output directory (overrides the config)");
  train_cmd->add_flag("--resume", train.resume, "Continue from the last periodic checkpoint");
  train_cmd->add_flag("--quiet", train.quiet, "No progress lines");

  rrnav::EvalOptions ev;
  std::string ev_ckpt, ev_e2e, ev_out;
  std::vector<std::string> ev_modes, ev_scen;
  std::vector<std::uint64_t> ev_seeds;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate controllers and write a report");
  eval_cmd->add_option("--config", ev.config, "Experiment config")->required();
  eval_cmd->add_option("--checkpoint", ev_ckpt, "Residual actor checkpoint (rrn, srrn)");
  eval_cmd->add_option("--e2e-checkpoint", ev_e2e, "End-to-end actor checkpoint");
  eval_cmd->add_option("--modes", ev_modes, "prior,random,end_to_end,rrn,srrn")->delimiter(',');
  eval_cmd->add_option("--scenarios", ev_scen, "goal_gen,env_gen")->delimiter(',');
  eval_cmd->add_option("--seeds", ev_seeds, "Evaluation seeds")->delimiter(',');
  eval_cmd->add_option("--out", ev_out, "report/1 JSON output");

  rrnav::RolloutOptions ro;
  std::string ro_ckpt, ro_world, ro_mode = "srrn";
  auto* roll_cmd = app.add_subcommand("rollout", "Record one episode as a trajectory CSV");
  roll_cmd->add_option("--config", ro.config, "Experiment config")->required();
  roll_cmd->add_option("--checkpoint", ro_ckpt, "Actor checkpoint");
  roll_cmd->add_option("--mode", ro_mode, "Controller")->capture_default_str();
  roll_cmd->add_option("--world", ro_world, "world/1 file (default: first training world)");
  roll_cmd->add_option("--seed", ro.seed, "Episode seed")->capture_default_str();
  roll_cmd->add_option("--out", ro.out, "Trajectory CSV")->required();

  rrnav::PlotOptions pl;
  std::string pl_kind, pl_meta;
  std::vector<std::string> pl_inputs;
  auto* plot_cmd = app.add_subcommand("plot", "Emit an SVG figure");
  plot_cmd->add_option("--kind", pl_kind, "trajectory | components | training_curve")->required();
  plot_cmd->add_option("--input", pl_inputs, "Trajectory CSV");
  plot_cmd->add_option("--meta", pl_meta, "Rollout meta JSON (default <input>.meta.json)");
  plot_cmd->add_option("--series", pl.series, "label=log1.csv,log2.csv (repeatable)");
  plot_cmd->add_option("--grid-cols", pl.grid_cols, "A* grid columns")->capture_default_str();
  plot_cmd->add_option("--grid-rows", pl.grid_rows, "A* grid rows")->capture_default_str();
  plot_cmd->add_option("--out", pl.out, "SVG output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*gen_cmd) {
      if (!gen_params.empty()) gen.params = gen_params;
      for (const auto& p : rrnav::cmd_gen_worlds(gen)) std::cout << p.string() << "\n";
    } else if (*train_cmd) {
      if (!train_seeds.empty()) train.seeds = train_seeds;
      if (!train_mode.empty()) train.mode = rrnav::parse_observation_mode(train_mode);
      if (train_episodes >= 0) train.episodes = train_episodes;
      if (!train_out.empty()) train.out_dir = train_out;
      rrnav::cmd_train(train);
    } else if (*eval_cmd) {
      if (!ev_ckpt.empty()) ev.residual_checkpoint = ev_ckpt;
      if (!ev_e2e.empty()) ev.e2e_checkpoint = ev_e2e;
      if (!ev_modes.empty()) ev.modes = parse_modes(ev_modes);
      if (!ev_scen.empty()) ev.scenarios = parse_scenarios(ev_scen);
      if (!ev_seeds.empty()) ev.seeds = ev_seeds;
      if (!ev_out.empty()) ev.out = ev_out;
      std::cout << rrnav::cmd_eval(ev);
    } else if (*roll_cmd) {
      if (!ro_ckpt.empty()) ro.checkpoint = ro_ckpt;
      if (!ro_world.empty()) ro.world = ro_world;
      ro.mode = rrnav::parse_policy_mode(ro_mode);
      rrnav::cmd_rollout(ro);
    } else if (*plot_cmd) {
      pl.kind = rrnav::parse_plot_kind(pl_kind);
      for (const auto& s : pl_inputs) pl.inputs.emplace_back(s);
      if (!pl_meta.empty()) pl.meta = pl_meta;
      rrnav::cmd_plot(pl);
    }
  } catch (const std::exception& e) {
    std::string msg = e.what();
    for (char& c : msg) {
      if (c == '\n') c = ' ';
    }
    std::cerr << "error: " << msg << "\n";
    return 1;
  }
  return 0;
}
