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

// Entry points behind the rrnav command-line tool. Each returns normally on
// success and throws on any error; the tool turns exceptions into a one-line
// diagnostic and a nonzero exit code.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rrnav/config.hpp"

namespace rrnav {

struct GenWorldsOptions {
  std::optional<std::filesystem::path> params;  // GeneratorParams JSON; defaults otherwise
  std::size_t count = 10;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
};
// Writes world_000.json, world_001.json, ... and returns their paths.
std::vector<std::filesystem::path> cmd_gen_worlds(const GenWorldsOptions& o);

GeneratorParams parse_generator_params(const std::string& text);
std::string serialize_generator_params(const GeneratorParams& p);

struct TrainOptions {
  std::filesystem::path config;
  std::optional<std::vector<std::uint64_t>> seeds;  // overrides config.seeds
  std::optional<ObservationMode> mode;              // overrides config.mode
  std::optional<int> episodes;                      // overrides td3.total_episodes
  std::optional<std::filesystem::path> out_dir;     // overrides config.output_dir
  bool resume = false;
  bool quiet = false;
};

// Output layout per seed: <out>/<mode>/seed_<s>/{actor.ckpt, log.csv} plus a
// resume/ directory refreshed every eval_every episodes.
std::filesystem::path run_directory(const std::filesystem::path& out, ObservationMode mode, std::uint64_t seed);
void cmd_train(const TrainOptions& o);

struct EvalOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> residual_checkpoint;
  std::optional<std::filesystem::path> e2e_checkpoint;
  std::optional<std::vector<PolicyMode>> modes;
  std::optional<std::vector<Scenario>> scenarios;
  std::optional<std::vector<std::uint64_t>> seeds;
  std::optional<std::filesystem::path> out;  // report/1 JSON
};
// Returns the report text table.
std::string cmd_eval(const EvalOptions& o);

struct RolloutOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> checkpoint;
  PolicyMode mode = PolicyMode::SRRN;
  std::optional<std::filesystem::path> world;  // world/1 file; else first training world
  std::uint64_t seed = 0;
  std::filesystem::path out;  // trajectory CSV; meta goes to <out>.meta.json
};
void cmd_rollout(const RolloutOptions& o);

enum class PlotKind { Trajectory, Components, TrainingCurve };
PlotKind parse_plot_kind(std::string_view s);

struct PlotOptions {
  PlotKind kind = PlotKind::Trajectory;
  std::vector<std::filesystem::path> inputs;  // trajectory: one CSV; components: one CSV
  std::optional<std::filesystem::path> meta;  // trajectory meta; default <input>.meta.json
  // training_curve: "label=log1.csv,log2.csv"
  std::vector<std::string> series;
  int grid_cols = 2000;
  int grid_rows = 1000;
  std::filesystem::path out;
};
void cmd_plot(const PlotOptions& o);

std::string read_file(const std::filesystem::path& p);
// Writes through a temporary file so readers never see partial output.
void write_file(const std::filesystem::path& p, const std::string& content);

}  // namespace rrnav
