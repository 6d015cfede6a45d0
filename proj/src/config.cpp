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

#include "rrnav/config.hpp"

#include <fstream>
#include <sstream>

#include "json_util.hpp"

namespace rrnav {
namespace {

using jsonio::get;
using jsonio::get_opt;
using jsonio::json;

constexpr const char* kConfigVersion = "config/1";

json generator_to_json(const GeneratorParams& g) {
  return json{{"width", g.width},
              {"height", g.height},
              {"robot_radius", g.robot_radius},
              {"density_min", g.density_min},
              {"density_max", g.density_max},
              {"rect_side_min", g.rect_side_min},
              {"rect_side_max", g.rect_side_max},
              {"circle_radius_min", g.circle_radius_min},
              {"circle_radius_max", g.circle_radius_max},
              {"circle_fraction", g.circle_fraction},
              {"min_gap", g.min_gap},
              {"wall_gap", g.wall_gap},
              {"region_depth", g.region_depth},
              {"region_height", g.region_height},
              {"region_inset", g.region_inset},
              {"region_clearance", g.region_clearance},
              {"check_cols", g.check_cols},
              {"check_rows", g.check_rows}};
}

GeneratorParams generator_from_json(const json& j, const std::string& w) {
  jsonio::check_keys(j, w,
                     {"width", "height", "robot_radius", "density_min", "density_max",
                      "rect_side_min", "rect_side_max", "circle_radius_min", "circle_radius_max",
                      "circle_fraction", "min_gap", "wall_gap", "region_depth", "region_height", "region_inset",
                      "region_clearance", "check_cols",
                      "check_rows"});
  GeneratorParams g;
  get_opt(j, w, "width", g.width);
  get_opt(j, w, "height", g.height);
  get_opt(j, w, "robot_radius", g.robot_radius);
  get_opt(j, w, "density_min", g.density_min);
  get_opt(j, w, "density_max", g.density_max);
  get_opt(j, w, "rect_side_min", g.rect_side_min);
  get_opt(j, w, "rect_side_max", g.rect_side_max);
  get_opt(j, w, "circle_radius_min", g.circle_radius_min);
  get_opt(j, w, "circle_radius_max", g.circle_radius_max);
  get_opt(j, w, "circle_fraction", g.circle_fraction);
  get_opt(j, w, "min_gap", g.min_gap);
  get_opt(j, w, "wall_gap", g.wall_gap);
  get_opt(j, w, "region_depth", g.region_depth);
  get_opt(j, w, "region_height", g.region_height);
  get_opt(j, w, "region_inset", g.region_inset);
  get_opt(j, w, "region_clearance", g.region_clearance);
  get_opt(j, w, "check_cols", g.check_cols);
  get_opt(j, w, "check_rows", g.check_rows);
  validate(g);
  return g;
}

json source_to_json(const WorldSource& s) {
  json j;
  if (s.generator) {
    j["generator"] = generator_to_json(*s.generator);
    j["count"] = s.count;
    j["seed"] = s.seed;
  } else {
    j["files"] = s.files;
  }
  return j;
}

WorldSource source_from_json(const json& j, const std::string& w) {
  jsonio::check_keys(j, w, {"files", "generator", "count", "seed"});
  WorldSource s;
  const bool has_files = j.contains("files");
  const bool has_gen = j.contains("generator");
  if (has_files == has_gen) throw ConfigError(w + ": give exactly one of 'files' or 'generator'");
  if (has_files) {
    if (j.contains("count") || j.contains("seed")) {
      throw ConfigError(w + ": 'count' and 'seed' only apply to a generator");
    }
    s.files = get<std::vector<std::string>>(j, w, "files");
    if (s.files.empty()) throw ConfigError(w + ".files: empty list");
  } else {
    s.generator = generator_from_json(j.at("generator"), w + ".generator");
    s.count = get<std::size_t>(j, w, "count");
    get_opt(j, w, "seed", s.seed);
    if (s.count == 0) throw ConfigError(w + ".count must be positive");
  }
  return s;
}

json td3_to_json(const Td3Config& c) {
  return json{{"gamma", c.gamma},
              {"tau", c.tau},
              {"policy_delay", c.policy_delay},
              {"smoothing_noise_sigma", c.smoothing_noise_sigma},
              {"smoothing_noise_clip", c.smoothing_noise_clip},
              {"exploration_noise_sigma", c.exploration_noise_sigma},
              {"batch_size", c.batch_size},
              {"buffer_capacity", c.buffer_capacity},
              {"warmup_steps", c.warmup_steps},
              {"critic_burn_in", c.critic_burn_in},
              {"residual_penalty", c.residual_penalty},
              {"actor_lr", c.actor_lr},
              {"critic_lr", c.critic_lr},
              {"total_episodes", c.total_episodes},
              {"eval_every", c.eval_every},
              {"actor_hidden", c.actor_hidden},
              {"critic_hidden", c.critic_hidden},
              {"dropout_p", c.dropout_p},
              {"dropout_in_training", c.dropout_in_training}};
}

Td3Config td3_from_json(const json& j) {
  const std::string w = "td3";
  jsonio::check_keys(j, w,
                     {"gamma", "tau", "policy_delay", "smoothing_noise_sigma", "smoothing_noise_clip",
                      "exploration_noise_sigma", "batch_size", "buffer_capacity", "warmup_steps",
                      "critic_burn_in", "residual_penalty", "actor_lr", "critic_lr", "total_episodes", "eval_every",
                      "actor_hidden", "critic_hidden", "dropout_p", "dropout_in_training"});
  Td3Config c;
  get_opt(j, w, "gamma", c.gamma);
  get_opt(j, w, "tau", c.tau);
  get_opt(j, w, "policy_delay", c.policy_delay);
  get_opt(j, w, "smoothing_noise_sigma", c.smoothing_noise_sigma);
  get_opt(j, w, "smoothing_noise_clip", c.smoothing_noise_clip);
  get_opt(j, w, "exploration_noise_sigma", c.exploration_noise_sigma);
  get_opt(j, w, "batch_size", c.batch_size);
  get_opt(j, w, "buffer_capacity", c.buffer_capacity);
  get_opt(j, w, "warmup_steps", c.warmup_steps);
  get_opt(j, w, "critic_burn_in", c.critic_burn_in);
  get_opt(j, w, "residual_penalty", c.residual_penalty);
  get_opt(j, w, "actor_lr", c.actor_lr);
  get_opt(j, w, "critic_lr", c.critic_lr);
  get_opt(j, w, "total_episodes", c.total_episodes);
  get_opt(j, w, "eval_every", c.eval_every);
  get_opt(j, w, "actor_hidden", c.actor_hidden);
  get_opt(j, w, "critic_hidden", c.critic_hidden);
  get_opt(j, w, "dropout_p", c.dropout_p);
  get_opt(j, w, "dropout_in_training", c.dropout_in_training);
  validate(c);
  return c;
}

std::vector<std::string> names_of(const std::vector<PolicyMode>& v) {
  std::vector<std::string> out;
  for (auto m : v) out.emplace_back(to_string(m));
  return out;
}

std::vector<std::string> names_of(const std::vector<Scenario>& v) {
  std::vector<std::string> out;
  for (auto s : v) out.emplace_back(to_string(s));
  return out;
}

}  // namespace

const char* to_string(ObservationMode m) {
  return m == ObservationMode::Residual ? "residual" : "end_to_end";
}

ObservationMode parse_observation_mode(std::string_view s) {
  if (s == "residual") return ObservationMode::Residual;
  if (s == "end_to_end") return ObservationMode::EndToEnd;
  throw ConfigError("unknown training mode '" + std::string(s) + "' (residual|end_to_end)");
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  const std::string w = "config";
  jsonio::check_keys(j, w,
                     {"version", "train_worlds", "heldout_worlds", "episode", "sensor", "prior",
                      "td3", "policy", "eval", "mode", "seeds", "output_dir"});
  const auto version = get<std::string>(j, w, "version");
  if (version != kConfigVersion) throw ConfigError("config: unsupported version '" + version + "'");

  ExperimentConfig c;
  if (!j.contains("train_worlds")) throw ConfigError("config: missing key 'train_worlds'");
  c.train_worlds = source_from_json(j.at("train_worlds"), "train_worlds");
  if (j.contains("heldout_worlds")) {
    c.heldout_worlds = source_from_json(j.at("heldout_worlds"), "heldout_worlds");
  }

  if (j.contains("episode")) {
    const auto& e = j.at("episode");
    jsonio::check_keys(e, "episode", {"d_threshold", "max_steps", "gamma", "dt"});
    get_opt(e, "episode", "d_threshold", c.env.episode.d_threshold);
    get_opt(e, "episode", "max_steps", c.env.episode.max_steps);
    get_opt(e, "episode", "gamma", c.env.episode.gamma);
    get_opt(e, "episode", "dt", c.env.episode.dt);
  }
  validate(c.env.episode);
  if (j.contains("sensor")) {
    const auto& s = j.at("sensor");
    jsonio::check_keys(s, "sensor", {"n_rays", "max_range"});
    get_opt(s, "sensor", "n_rays", c.env.sensor.n_rays);
    get_opt(s, "sensor", "max_range", c.env.sensor.max_range);
  }
  if (c.env.sensor.n_rays < kLaserBins || c.env.sensor.n_rays % kLaserBins != 0) {
    throw ConfigError("sensor.n_rays must be a positive multiple of 15");
  }
  if (!(c.env.sensor.max_range > 0.0)) throw ConfigError("sensor.max_range must be positive");
  if (j.contains("prior")) {
    const auto& p = j.at("prior");
    jsonio::check_keys(p, "prior", {"k_att", "k_rep", "d_influence", "k_omega", "v_max"});
    get_opt(p, "prior", "k_att", c.env.prior.k_att);
    get_opt(p, "prior", "k_rep", c.env.prior.k_rep);
    get_opt(p, "prior", "d_influence", c.env.prior.d_influence);
    get_opt(p, "prior", "k_omega", c.env.prior.k_omega);
    get_opt(p, "prior", "v_max", c.env.prior.v_max);
  }
  validate(c.env.prior, c.env.sensor.max_range);
  if (j.contains("td3")) c.td3 = td3_from_json(j.at("td3"));
  if (c.td3.gamma != c.env.episode.gamma) {
    throw ConfigError("td3.gamma and episode.gamma must agree");
  }
  if (j.contains("policy")) {
    const auto& p = j.at("policy");
    jsonio::check_keys(p, "policy", {"mc_passes", "rrn_single_pass", "epsilon_override"});
    get_opt(p, "policy", "mc_passes", c.policy.mc_passes);
    get_opt(p, "policy", "rrn_single_pass", c.policy.rrn_single_pass);
    if (p.contains("epsilon_override")) {
      c.policy.epsilon_override = get<double>(p, "policy", "epsilon_override");
    }
    if (c.policy.mc_passes < 2) throw ConfigError("policy.mc_passes must be >= 2");
  }
  if (j.contains("eval")) {
    const auto& e = j.at("eval");
    const std::string ew = "eval";
    jsonio::check_keys(e, ew,
                       {"goal_gen_goals", "episodes_per_goal", "env_gen_worlds",
                        "episodes_per_world", "grid_cols", "grid_rows", "modes", "scenarios",
                        "seeds", "train_eval_episodes", "train_eval_seed"});
    get_opt(e, ew, "goal_gen_goals", c.eval.suite.goal_gen_goals);
    get_opt(e, ew, "episodes_per_goal", c.eval.suite.episodes_per_goal);
    get_opt(e, ew, "env_gen_worlds", c.eval.suite.env_gen_worlds);
    get_opt(e, ew, "episodes_per_world", c.eval.suite.episodes_per_world);
    get_opt(e, ew, "grid_cols", c.eval.suite.grid_cols);
    get_opt(e, ew, "grid_rows", c.eval.suite.grid_rows);
    if (e.contains("modes")) {
      c.eval.modes.clear();
      for (const auto& s : get<std::vector<std::string>>(e, ew, "modes")) {
        c.eval.modes.push_back(parse_policy_mode(s));
      }
    }
    if (e.contains("scenarios")) {
      c.eval.scenarios.clear();
      for (const auto& s : get<std::vector<std::string>>(e, ew, "scenarios")) {
        c.eval.scenarios.push_back(parse_scenario(s));
      }
    }
    get_opt(e, ew, "seeds", c.eval.seeds);
    get_opt(e, ew, "train_eval_episodes", c.eval.train_eval_episodes);
    get_opt(e, ew, "train_eval_seed", c.eval.train_eval_seed);
  }
  if (c.eval.seeds.empty()) throw ConfigError("eval.seeds must not be empty");
  if (c.eval.train_eval_episodes < 1) throw ConfigError("eval.train_eval_episodes must be >= 1");
  if (c.eval.suite.grid_cols < 2 || c.eval.suite.grid_rows < 2) {
    throw ConfigError("eval grid must be at least 2x2");
  }

  if (j.contains("mode")) c.mode = parse_observation_mode(get<std::string>(j, w, "mode"));
  get_opt(j, w, "seeds", c.seeds);
  if (c.seeds.empty()) throw ConfigError("config.seeds must not be empty");
  get_opt(j, w, "output_dir", c.output_dir);
  return c;
}

std::string serialize_config(const ExperimentConfig& c) {
  json policy{{"mc_passes", c.policy.mc_passes}, {"rrn_single_pass", c.policy.rrn_single_pass}};
  if (c.policy.epsilon_override) policy["epsilon_override"] = *c.policy.epsilon_override;
  json j{{"version", kConfigVersion},
         {"train_worlds", source_to_json(c.train_worlds)},
         {"episode",
          {{"d_threshold", c.env.episode.d_threshold},
           {"max_steps", c.env.episode.max_steps},
           {"gamma", c.env.episode.gamma},
           {"dt", c.env.episode.dt}}},
         {"sensor", {{"n_rays", c.env.sensor.n_rays}, {"max_range", c.env.sensor.max_range}}},
         {"prior",
          {{"k_att", c.env.prior.k_att},
           {"k_rep", c.env.prior.k_rep},
           {"d_influence", c.env.prior.d_influence},
           {"k_omega", c.env.prior.k_omega},
           {"v_max", c.env.prior.v_max}}},
         {"td3", td3_to_json(c.td3)},
         {"policy", policy},
         {"eval",
          {{"goal_gen_goals", c.eval.suite.goal_gen_goals},
           {"episodes_per_goal", c.eval.suite.episodes_per_goal},
           {"env_gen_worlds", c.eval.suite.env_gen_worlds},
           {"episodes_per_world", c.eval.suite.episodes_per_world},
           {"grid_cols", c.eval.suite.grid_cols},
           {"grid_rows", c.eval.suite.grid_rows},
           {"modes", names_of(c.eval.modes)},
           {"scenarios", names_of(c.eval.scenarios)},
           {"seeds", c.eval.seeds},
           {"train_eval_episodes", c.eval.train_eval_episodes},
           {"train_eval_seed", c.eval.train_eval_seed}}},
         {"mode", to_string(c.mode)},
         {"seeds", c.seeds},
         {"output_dir", c.output_dir}};
  if (c.heldout_worlds.generator || !c.heldout_worlds.files.empty()) {
    j["heldout_worlds"] = source_to_json(c.heldout_worlds);
  }
  return j.dump(2) + "\n";
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void save_config(const ExperimentConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write config file " + path.string());
  out << serialize_config(config);
}

std::vector<WorldSpec> resolve_worlds(const WorldSource& source, const std::filesystem::path& base_dir) {
  if (source.generator) return generate_worlds(*source.generator, source.count, source.seed);
  std::vector<WorldSpec> out;
  for (const auto& f : source.files) {
    std::filesystem::path p(f);
    if (p.is_relative()) p = base_dir / p;
    out.push_back(load_world(p));
  }
  return out;
}

}  // namespace rrnav
