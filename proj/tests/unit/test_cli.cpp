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

// Drives the rrnav binary end to end through std::system.

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "common.hpp"
#include "doctest.h"
#include "rrnav/checkpoint.hpp"
#include "rrnav/config.hpp"
#include "rrnav/td3.hpp"
#include "rrnav/trajectory.hpp"

#ifndef RRNAV_BIN
#error "RRNAV_BIN must point at the rrnav executable"
#endif

using namespace rrnav;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run rrnav_cli(const fs::path& dir, const std::string& args) {
  const fs::path out = dir / "stdout.txt";
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = "cd '" + dir.string() + "' && '" RRNAV_BIN "' " + args + " >'" + out.string() +
                          "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

// Tiny experiment: three generated worlds, small nets, a handful of episodes.
void write_small_config(const fs::path& dir) {
  ExperimentConfig c;
  c.train_worlds = WorldSource{{}, GeneratorParams{}, 3, 100};
  c.heldout_worlds = WorldSource{{}, GeneratorParams{}, 2, 200};
  c.td3.actor_hidden = {16, 16};
  c.td3.critic_hidden = {16, 16};
  c.td3.batch_size = 16;
  c.td3.warmup_steps = 100;
  c.td3.total_episodes = 20;
  c.td3.eval_every = 10;
  c.policy.mc_passes = 10;
  c.eval.suite = EvalConfig{2, 2, 2, 2, 200, 100};
  c.eval.seeds = {11};
  c.eval.train_eval_episodes = 4;
  c.output_dir = "out";
  save_config(c, dir / "cfg.json");
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("gen-worlds is reproducible byte for byte") {
  rrnav::testing::TempDir tmp("gen");
  REQUIRE(rrnav_cli(tmp.path(), "gen-worlds --count 3 --seed 9 --out a").code == 0);
  REQUIRE(rrnav_cli(tmp.path(), "gen-worlds --count 3 --seed 9 --out b").code == 0);
  for (const char* f : {"world_000.json", "world_001.json", "world_002.json"}) {
    CHECK(slurp(tmp.path() / "a" / f) == slurp(tmp.path() / "b" / f));
    CHECK_NOTHROW(load_world(tmp.path() / "a" / f));
  }
}

TEST_CASE("errors are one line with a nonzero exit") {
  rrnav::testing::TempDir tmp("err");
  Run r = rrnav_cli(tmp.path(), "train --config missing.json");
  CHECK(r.code != 0);
  CHECK(r.err.rfind("error: ", 0) == 0);
  CHECK(r.err.find('\n') == r.err.size() - 1);

  r = rrnav_cli(tmp.path(), "frobnicate");
  CHECK(r.code != 0);

  std::ofstream(tmp.path() / "empty.csv").close();
  r = rrnav_cli(tmp.path(), "plot --kind components --input empty.csv --out e.svg");
  CHECK(r.code != 0);
  CHECK(r.err.find("line") != std::string::npos);
  CHECK_FALSE(fs::exists(tmp.path() / "e.svg"));
}

TEST_CASE("train, eval, rollout and plot") {
  rrnav::testing::TempDir tmp("pipe");
  write_small_config(tmp.path());
  Run r = rrnav_cli(tmp.path(), "train --config cfg.json --seeds 1 --quiet");
  REQUIRE_MESSAGE(r.code == 0, r.err);
  r = rrnav_cli(tmp.path(), "train --config cfg.json --seeds 1 --mode end_to_end --quiet");
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const fs::path res = tmp.path() / "out/residual/seed_1";
  const fs::path e2e = tmp.path() / "out/end_to_end/seed_1";

  SUBCASE("checkpoint and log") {
    const std::string bytes = slurp(res / "actor.ckpt");
    const Checkpoint c = decode_checkpoint(bytes);
    CHECK(c.mode == ObservationMode::Residual);
    CHECK(encode_checkpoint(c.net, c.mode) == bytes);
    const TrainingLog log = parse_training_log(slurp(res / "log.csv"));
    REQUIRE(log.rows.size() == 20);
    int evals = 0;
    for (const auto& row : log.rows) evals += row.eval_success.has_value();
    CHECK(evals == 2);
  }
  SUBCASE("prior evaluation needs no checkpoint and reports are stable") {
    r = rrnav_cli(tmp.path(), "eval --config cfg.json --modes prior,random --out r1.json");
    REQUIRE_MESSAGE(r.code == 0, r.err);
    r = rrnav_cli(tmp.path(), "eval --config cfg.json --modes prior,random --out r2.json");
    REQUIRE(r.code == 0);
    const std::string report = slurp(tmp.path() / "r1.json");
    CHECK(report == slurp(tmp.path() / "r2.json"));
    std::size_t rows = 0;
    for (std::size_t p = report.find("\"mode\""); p != std::string::npos; p = report.find("\"mode\"", p + 1)) ++rows;
    CHECK(rows == 4);
  }
  SUBCASE("mode and checkpoint must agree") {
    r = rrnav_cli(tmp.path(), "eval --config cfg.json --modes rrn --checkpoint out/end_to_end/seed_1/actor.ckpt");
    CHECK(r.code != 0);
    CHECK(r.err.find("19") != std::string::npos);
    CHECK(r.err.find("21") != std::string::npos);
    r = rrnav_cli(tmp.path(), "eval --config cfg.json --modes srrn");
    CHECK(r.code != 0);
    r = rrnav_cli(tmp.path(),
                  "eval --config cfg.json --modes end_to_end,srrn --scenarios goal_gen --checkpoint "
                  "out/residual/seed_1/actor.ckpt --e2e-checkpoint out/end_to_end/seed_1/actor.ckpt");
    CHECK_MESSAGE(r.code == 0, r.err);
  }
  SUBCASE("rollout records and plots") {
    r = rrnav_cli(tmp.path(), "rollout --config cfg.json --mode srrn --checkpoint out/residual/seed_1/actor.ckpt --seed 3 --out s.csv");
    REQUIRE_MESSAGE(r.code == 0, r.err);
    for (const auto& row : parse_trajectory(slurp(tmp.path() / "s.csv"))) {
      const Residual a = applied_residual(row);
      CHECK(row.used_prior_only == (a[0] == 0.0 && a[1] == 0.0));
      REQUIRE(row.epsilon.has_value());
      CHECK(*row.epsilon >= 0.0);
      CHECK(*row.epsilon <= 1.0);
    }
    r = rrnav_cli(tmp.path(), "rollout --config cfg.json --mode rrn --checkpoint out/residual/seed_1/actor.ckpt --seed 3 --out r.csv");
    REQUIRE(r.code == 0);
    for (const auto& row : parse_trajectory(slurp(tmp.path() / "r.csv"))) {
      CHECK_FALSE(row.used_prior_only);
      CHECK_FALSE(row.epsilon.has_value());
    }
    for (const char* cmd : {"plot --kind trajectory --input s.csv --grid-cols 400 --grid-rows 200 --out t.svg",
                            "plot --kind components --input s.csv --out c.svg",
                            "plot --kind training_curve --series res=out/residual/seed_1/log.csv "
                            "--series e2e=out/end_to_end/seed_1/log.csv --out l.svg"}) {
      r = rrnav_cli(tmp.path(), cmd);
      CHECK_MESSAGE(r.code == 0, r.err);
    }
    CHECK(slurp(tmp.path() / "t.svg").find("<svg") == 0);
  }
}

TEST_CASE("resume continues from the last periodic checkpoint") {
  rrnav::testing::TempDir tmp("resume");
  write_small_config(tmp.path());
  REQUIRE(rrnav_cli(tmp.path(), "train --config cfg.json --seeds 2 --quiet --out full").code == 0);
  // A 10-episode run leaves the same periodic checkpoint an interrupted
  // 20-episode run would have left behind.
  REQUIRE(rrnav_cli(tmp.path(), "train --config cfg.json --seeds 2 --quiet --out part --episodes 10").code == 0);
  const Run r = rrnav_cli(tmp.path(), "train --config cfg.json --seeds 2 --quiet --out part --resume");
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const auto full = parse_training_log(slurp(tmp.path() / "full/residual/seed_2/log.csv"));
  const auto part = parse_training_log(slurp(tmp.path() / "part/residual/seed_2/log.csv"));
  REQUIRE(part.rows.size() == 20);
  for (int i = 0; i < 10; ++i) CHECK(part.rows[i] == full.rows[i]);
  REQUIRE(part.rows.back().eval_success.has_value());
  CHECK(std::abs(*part.rows.back().eval_success - *full.rows.back().eval_success) <= 0.5);
}

}  // TEST_SUITE
