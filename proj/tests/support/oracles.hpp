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

// Independent reference implementations shared by the unit tests and the
// acceptance runner. Each one is written for obviousness, not speed.

#include <algorithm>
#include <cmath>
#include <random>
#include <variant>
#include <vector>

#include "rrnav/eval.hpp"
#include "rrnav/nn.hpp"
#include "rrnav/world.hpp"

namespace rrnav::oracle {

// True for points inside an obstacle or outside the arena.
inline bool inside_any(const WorldSpec& w, double x, double y) {
  if (std::abs(x) >= 0.5 * w.width || std::abs(y) >= 0.5 * w.height) return true;
  for (const auto& s : w.obstacles) {
    if (const auto* r = std::get_if<Rect>(&s)) {
      if (x >= r->x_min && x <= r->x_max && y >= r->y_min && y <= r->y_max) return true;
    } else {
      const auto& c = std::get<Circle>(s);
      if ((x - c.cx) * (x - c.cx) + (y - c.cy) * (y - c.cy) <= c.r * c.r) return true;
    }
  }
  return false;
}

// Reference ray caster: marches in 1 mm steps and reports the first sample
// that lands inside an obstacle or outside the arena.
inline double march(const WorldSpec& w, Pose o, double angle, double max_range) {
  const double h = o.theta + angle;
  const double step = 1e-3;
  for (int k = 1;; ++k) {
    const double t = k * step;
    if (t >= max_range) return max_range;
    if (inside_any(w, o.x + t * std::cos(h), o.y + t * std::sin(h))) return t;
  }
}

// Worst |raycast - march| over `n` random cluttered scenes in a 10 x 8 arena.
inline double raycast_march_worst(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> size(0.1, 1.0);
  int checked = 0;
  double worst = 0.0;
  while (checked < n) {
    WorldSpec w;
    w.width = 10.0;
    w.height = 8.0;
    w.robot_radius = 0.2;
    const int k = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < k; ++i) {
      const double cx = 4.0 * u(rng);
      const double cy = 3.0 * u(rng);
      if (rng() % 2) {
        w.obstacles.push_back(Circle{cx, cy, size(rng)});
      } else {
        w.obstacles.push_back(Rect{cx, cy, cx + size(rng), cy + size(rng)});
      }
    }
    const Pose o{4.5 * u(rng), 3.5 * u(rng), kPi * u(rng)};
    if (inside_any(w, o.x, o.y)) continue;
    const double angle = 0.5 * kPi * u(rng);
    worst = std::max(worst, std::abs(raycast(o, angle, 6.0, w) - march(w, o, angle, 6.0)));
    ++checked;
  }
  return worst;
}

// Exact cost a + b*sqrt(2) in cell units; a counts straight moves, b diagonal ones.
struct Exact {
  long a = 0;
  long b = 0;
};

// a1 + b1 r < a2 + b2 r with r = sqrt(2), decided on integers.
inline bool exact_less(Exact p, Exact q) {
  const long da = q.a - p.a;  // need da + db r > 0
  const long db = q.b - p.b;
  if (da >= 0 && db >= 0) return da > 0 || db > 0;
  if (da <= 0 && db <= 0) return false;
  if (da > 0) return da * da > 2 * db * db;
  return 2 * db * db > da * da;
}

// Plain Dijkstra over exact costs, 8-connected, diagonal moves only when both
// side cells are free.
inline double dijkstra(const OccupancyGrid& g, GridCell s, GridCell t) {
  const int W = g.cols(), H = g.rows();
  std::vector<Exact> dist(static_cast<std::size_t>(W * H));
  std::vector<bool> seen(dist.size(), false), done(dist.size(), false);
  auto id = [&](GridCell c) { return static_cast<std::size_t>(c.row * W + c.col); };
  seen[id(s)] = true;
  for (;;) {
    // O(n^2) selection keeps the oracle obviously correct.
    std::size_t best = dist.size();
    for (std::size_t i = 0; i < dist.size(); ++i) {
      if (seen[i] && !done[i] && (best == dist.size() || exact_less(dist[i], dist[best]))) best = i;
    }
    if (best == dist.size()) return kUnreachable;
    done[best] = true;
    const GridCell c{static_cast<int>(best % W), static_cast<int>(best / W)};
    if (c == t) return path_cost(g, dist[best].a, 0, dist[best].b);
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        if (dr == 0 && dc == 0) continue;
        const GridCell n{c.col + dc, c.row + dr};
        if (!g.in_bounds(n) || g.occupied(n)) continue;
        if (dr != 0 && dc != 0 && (g.occupied({c.col + dc, c.row}) || g.occupied({c.col, c.row + dr}))) continue;
        Exact nd = dist[best];
        (dr != 0 && dc != 0 ? nd.b : nd.a) += 1;
        const std::size_t ni = id(n);
        if (!seen[ni] || exact_less(nd, dist[ni])) {
          dist[ni] = nd;
          seen[ni] = true;
        }
      }
    }
  }
}

struct GridAgreement {
  int instances = 0;
  int mismatches = 0;
  int reachable = 0;
};

// A* against Dijkstra on random 50 x 50 grids with 30% walls.
inline GridAgreement astar_vs_dijkstra(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution wall(0.3);
  std::uniform_int_distribution<int> cell(0, 49);
  GridAgreement out;
  for (int trial = 0; trial < n; ++trial) {
    OccupancyGrid g(50, 50, 0, 0, 0.1, 0.1);
    for (int r = 0; r < 50; ++r) {
      for (int c = 0; c < 50; ++c) g.set_occupied({c, r}, wall(rng));
    }
    GridCell s{cell(rng), cell(rng)}, t{cell(rng), cell(rng)};
    g.set_occupied(s, false);
    g.set_occupied(t, false);
    const double ref = dijkstra(g, s, t);
    out.mismatches += astar_shortest(g, s, t) != ref;
    out.reachable += std::isfinite(ref);
    ++out.instances;
  }
  return out;
}

inline std::vector<double> normal_vector(std::size_t n, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

struct GradCheck {
  double worst_rel = 0.0;
  int nets = 0;
  int nets_with_masks = 0;
};

// Backprop against central differences on randomized MLPs. The loss is
// sum_k upstream_k * output_k with any dropout masks frozen; the relative
// error has a 1e-3 floor so exactly-zero gradients (dead ReLUs, dropped units)
// compare on an absolute scale.
inline GradCheck gradient_check(int n_nets, std::uint64_t seed) {
  Rng rng(seed);
  GradCheck out;
  for (int trial = 0; trial < n_nets; ++trial) {
    const std::size_t depth = 1 + rng() % 3;
    std::vector<std::size_t> sizes{1 + rng() % 5};
    for (std::size_t l = 0; l < depth; ++l) sizes.push_back(2 + rng() % 7);
    sizes.push_back(1 + rng() % 3);
    const auto act = trial % 2 ? OutputActivation::Tanh : OutputActivation::Identity;
    const double p = trial % 3 == 0 ? 0.0 : 0.3;
    Mlp net = Mlp::initialized(sizes, act, p, rng);
    // Larger output weights than the default init so tanh is exercised.
    std::normal_distribution<double> g(0.0, 0.5);
    for (double& w : net.weights(net.num_layers() - 1)) w = g(rng);
    for (double& q : net.params()) q += 0.05 * g(rng);

    const std::size_t batch = 1 + rng() % 4;
    const auto x = normal_vector(batch * sizes.front(), rng);
    const auto up = normal_vector(batch * sizes.back(), rng);
    Rng mrng(static_cast<std::uint64_t>(trial));
    const ForwardTrace tr = forward(net, x, batch, DropoutMode::stochastic(mrng));
    const Gradients grad = backward(net, tr, up);
    const auto& masks = tr.masks;
    auto loss = [&](const Mlp& m) {
      const ForwardTrace t =
          masks.empty() ? forward(m, x, batch, DropoutMode::off()) : forward_masked(m, x, batch, masks);
      double s = 0.0;
      for (std::size_t i = 0; i < up.size(); ++i) s += up[i] * t.output[i];
      return s;
    };
    const double h = 1e-5;
    for (std::size_t i = 0; i < net.params().size(); ++i) {
      Mlp plus = net, minus = net;
      plus.params()[i] += h;
      minus.params()[i] -= h;
      const double fd = (loss(plus) - loss(minus)) / (2 * h);
      const double an = grad.params[i];
      const double rel = std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-3});
      out.worst_rel = std::max(out.worst_rel, rel);
    }
    ++out.nets;
    out.nets_with_masks += net.dropout_p() > 0.0 && !masks.empty();
  }
  return out;
}

// Worst |w - closed form| after one Adam step on scalar problems. With bias
// correction the first step is w - lr * g / (|g| + eps).
inline double adam_first_step_error() {
  double worst = 0.0;
  for (double lr : {0.01, 1e-3, 0.5}) {
    for (double g : {3.0, -0.02, 1e-6, -250.0}) {
      for (double w0 : {0.5, -1.25, 0.0}) {
        AdamState st(1, lr);
        std::vector<double> w{w0};
        adam_step(st, w, std::vector<double>{g});
        worst = std::max(worst, std::abs(w[0] - (w0 - lr * g / (std::abs(g) + 1e-8))));
      }
    }
  }
  return worst;
}

}  // namespace rrnav::oracle
