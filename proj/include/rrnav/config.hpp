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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rrnav/env.hpp"
#include "rrnav/eval.hpp"
#include "rrnav/policy.hpp"
#include "rrnav/td3.hpp"
#include "rrnav/worldgen.hpp"

namespace rrnav {

// Where a world suite comes from: explicit world/1 files, or `count` worlds
// drawn from a generator with its own seed.
struct WorldSource {
  std::vector<std::string> files;
  std::optional<GeneratorParams> generator;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  friend bool operator==(const WorldSource&, const WorldSource&) = default;
};

struct EvalSettings {
  EvalConfig suite;
  std::vector<PolicyMode> modes{PolicyMode::PriorOnly, PolicyMode::EndToEnd, PolicyMode::RRN,
                                PolicyMode::SRRN, PolicyMode::Random};
  std::vector<Scenario> scenarios{Scenario::GoalGen, Scenario::EnvGen};
  std::vector<std::uint64_t> seeds{11, 12, 13};
  // Periodic evaluation during training.
  int train_eval_episodes = 20;
  std::uint64_t train_eval_seed = 7;
  friend bool operator==(const EvalSettings&, const EvalSettings&) = default;
};

// config/1. A config plus its seeds determines every artifact.
struct ExperimentConfig {
  WorldSource train_worlds;
  WorldSource heldout_worlds;
  EnvSetup env;
  Td3Config td3;
  PolicyOptions policy;
  EvalSettings eval;
  ObservationMode mode = ObservationMode::Residual;
  std::vector<std::uint64_t> seeds{1};
  std::string output_dir = "out";
  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

const char* to_string(ObservationMode m);
// "residual" or "end_to_end".
ObservationMode parse_observation_mode(std::string_view s);

// Throws ConfigError on unknown keys, a wrong version or invalid values.
ExperimentConfig parse_config(const std::string& text);
std::string serialize_config(const ExperimentConfig& config);
ExperimentConfig load_config(const std::filesystem::path& path);
void save_config(const ExperimentConfig& config, const std::filesystem::path& path);

// Relative world file paths resolve against `base_dir`.
std::vector<WorldSpec> resolve_worlds(const WorldSource& source, const std::filesystem::path& base_dir);

}  // namespace rrnav
