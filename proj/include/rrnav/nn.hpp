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
#include <span>
#include <vector>

#include "rrnav/world.hpp"

namespace rrnav {

enum class OutputActivation { Tanh, Identity };

// Fully-connected ReLU network with one flat parameter vector. Layer l stores
// its weights (rows = outputs, row-major) followed by its bias.
class Mlp {
 public:
  Mlp() = default;
  // All parameters zero.
  Mlp(std::vector<std::size_t> layer_sizes, OutputActivation output, double dropout_p);
  Mlp(const Mlp& other);
  Mlp& operator=(const Mlp& other);
  Mlp(Mlp&&) noexcept = default;
  Mlp& operator=(Mlp&&) noexcept = default;

  // He-normal hidden layers, zero hidden biases, U(-1e-3, 1e-3) output layer.
  static Mlp initialized(std::vector<std::size_t> layer_sizes, OutputActivation output,
                         double dropout_p, Rng& rng);

  const std::vector<std::size_t>& layer_sizes() const { return sizes_; }
  std::size_t num_layers() const { return sizes_.size() - 1; }
  std::size_t input_dim() const { return sizes_.front(); }
  std::size_t output_dim() const { return sizes_.back(); }
  OutputActivation output_activation() const { return output_; }
  double dropout_p() const { return dropout_p_; }

  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }
  std::span<double> weights(std::size_t layer);
  std::span<const double> weights(std::size_t layer) const;
  std::span<double> bias(std::size_t layer);
  std::span<const double> bias(std::size_t layer) const;
  std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
  std::size_t bias_offset(std::size_t layer) const {
    return offsets_[layer] + sizes_[layer] * sizes_[layer + 1];
  }

  // Identifies this instance; copies get a fresh tag.
  std::uint64_t tag() const { return tag_; }

 private:
  std::vector<std::size_t> sizes_;
  OutputActivation output_ = OutputActivation::Identity;
  double dropout_p_ = 0.0;
  std::vector<double> params_;
  std::vector<std::size_t> offsets_;
  std::uint64_t tag_ = 0;
};

// Off, or inverted dropout driven by a caller-owned generator.
class DropoutMode {
 public:
  static DropoutMode off() { return DropoutMode(nullptr); }
  static DropoutMode stochastic(Rng& rng) { return DropoutMode(&rng); }
  bool is_stochastic() const { return rng_ != nullptr; }
  Rng& rng() const { return *rng_; }

 private:
  explicit DropoutMode(Rng* rng) : rng_(rng) {}
  Rng* rng_;
};

// Everything backward() needs from a forward pass over a batch.
struct ForwardTrace {
  std::uint64_t net_tag = 0;
  std::size_t batch = 0;
  // layer_inputs[l] is the (masked) input of layer l, batch x layer_sizes[l].
  std::vector<std::vector<double>> layer_inputs;
  // Per hidden layer keep-scale (0 or 1/(1-p)); empty when dropout was off.
  std::vector<std::vector<double>> masks;
  std::vector<double> output;
};

// Batch of row-major inputs, batch x input_dim.
ForwardTrace forward(const Mlp& net, std::span<const double> inputs, std::size_t batch,
                     DropoutMode mode);
// Replays explicit hidden-layer masks (same layout as ForwardTrace::masks).
ForwardTrace forward_masked(const Mlp& net, std::span<const double> inputs, std::size_t batch,
                            const std::vector<std::vector<double>>& masks);
std::vector<double> forward(const Mlp& net, std::span<const double> input,
                            DropoutMode mode = DropoutMode::off());

struct Gradients {
  std::vector<double> params;  // same layout as Mlp::params(), summed over the batch
  std::vector<double> input;   // batch x input_dim
};

struct BackwardOptions {
  bool param_grads = true;
  bool input_grads = true;
};

// Gradients of sum_b <output_b, upstream_b> for the pass recorded in `trace`.
// Throws UsageError if the trace came from another network or has the wrong shape.
Gradients backward(const Mlp& net, const ForwardTrace& trace, std::span<const double> upstream,
                   BackwardOptions options = {});

struct AdamState {
  double learning_rate = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::uint64_t step = 0;
  std::vector<double> m;
  std::vector<double> v;

  AdamState() = default;
  AdamState(std::size_t n_params, double lr) : learning_rate(lr), m(n_params), v(n_params) {}
};

void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads);

struct McStatistics {
  std::vector<double> mean;
  std::vector<double> variance;  // population (divide by n)
};

// n_passes stochastic forwards of one input. Deterministic for a given seed.
McStatistics mc_statistics(const Mlp& net, std::span<const double> input, std::size_t n_passes,
                           std::uint64_t seed);

}  // namespace rrnav
