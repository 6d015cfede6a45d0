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

#include "rrnav/trajectory.hpp"

#include "rrnav/errors.hpp"
#include "text_util.hpp"

namespace rrnav {
namespace {

std::string opt(const std::optional<double>& v) {
  return v ? textio::format_double(*v) : std::string();
}

}  // namespace

Residual applied_residual(const TrajectoryRow& row) {
  const Action base = row.prior.value_or(Action{});
  return {row.executed.v - base.v, row.executed.omega - base.omega};
}

std::string format_trajectory(const std::vector<TrajectoryRow>& rows) {
  using textio::format_double;
  std::string out = std::string(kTrajectoryHeader) + "\n";
  for (const auto& r : rows) {
    const auto pv = r.prior ? std::optional<double>(r.prior->v) : std::nullopt;
    const auto pw = r.prior ? std::optional<double>(r.prior->omega) : std::nullopt;
    const auto mv = r.mu ? std::optional<double>((*r.mu)[0]) : std::nullopt;
    const auto mw = r.mu ? std::optional<double>((*r.mu)[1]) : std::nullopt;
    const auto vv = r.variance ? std::optional<double>((*r.variance)[0]) : std::nullopt;
    const auto vw = r.variance ? std::optional<double>((*r.variance)[1]) : std::nullopt;
    out += std::to_string(r.t) + "," + format_double(r.pose.x) + "," + format_double(r.pose.y) +
           "," + format_double(r.pose.theta) + "," + format_double(r.executed.v) + "," +
           format_double(r.executed.omega) + "," + opt(pv) + "," + opt(pw) + "," + opt(mv) + "," +
           opt(mw) + "," + opt(vv) + "," + opt(vw) + "," + opt(r.epsilon) + "," +
           (r.used_prior_only ? "1" : "0") + "," + format_double(r.reward) + "\n";
  }
  return out;
}

std::vector<TrajectoryRow> parse_trajectory(const std::string& text) {
  const auto ls = textio::lines(text);
  if (ls.empty() || ls[0] != kTrajectoryHeader) {
    throw ParseError("trajectory: missing or wrong header", 1);
  }
  std::vector<TrajectoryRow> rows;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    if (ls[i].empty()) continue;
    const std::size_t line = i + 1;
    const auto f = textio::split(ls[i], ',');
    if (f.size() != 15) throw ParseError("trajectory: expected 15 columns", line);
    auto pair = [&](std::size_t a, const char* name) -> std::optional<Residual> {
      const auto x = textio::parse_optional(f[a], name, line);
      const auto y = textio::parse_optional(f[a + 1], name, line);
      if (x.has_value() != y.has_value()) {
        throw ParseError(std::string("trajectory: half-empty ") + name + " pair", line);
      }
      if (!x) return std::nullopt;
      return Residual{*x, *y};
    };
    TrajectoryRow r;
    r.t = static_cast<int>(textio::parse_int(f[0], "t", line));
    r.pose = {textio::parse_double(f[1], "x", line), textio::parse_double(f[2], "y", line),
              textio::parse_double(f[3], "theta", line)};
    r.executed = {textio::parse_double(f[4], "v_exec", line),
                  textio::parse_double(f[5], "omega_exec", line)};
    if (auto p = pair(6, "prior")) r.prior = Action{(*p)[0], (*p)[1]};
    r.mu = pair(8, "mu");
    r.variance = pair(10, "var");
    r.epsilon = textio::parse_optional(f[12], "epsilon", line);
    const auto used = textio::parse_int(f[13], "used_prior_only", line);
    if (used != 0 && used != 1) throw ParseError("trajectory: used_prior_only must be 0 or 1", line);
    r.used_prior_only = used == 1;
    r.reward = textio::parse_double(f[14], "reward", line);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace rrnav
