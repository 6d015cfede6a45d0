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

#include "rrnav/nn.hpp"

#include <atomic>
#include <cmath>

#include "rrnav/errors.hpp"
#include "rrnav/simd.hpp"

namespace rrnav {
namespace {

std::uint64_t next_tag() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

void check_input(const Mlp& net, std::span<const double> inputs, std::size_t batch) {
  if (net.layer_sizes().size() < 2) throw UsageError("network has no layers");
  if (batch == 0 || inputs.size() != batch * net.input_dim()) {
    throw UsageError("forward: expected " + std::to_string(batch) + " x " +
                     std::to_string(net.input_dim()) + " inputs, got " +
                     std::to_string(inputs.size()));
  }
}

std::vector<std::vector<double>> draw_masks(const Mlp& net, std::size_t batch, Rng& rng) {
  const double p = net.dropout_p();
  const double keep_scale = 1.0 / (1.0 - p);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> masks(net.num_layers() - 1);
  for (std::size_t l = 0; l + 1 < net.num_layers(); ++l) {
    masks[l].resize(batch * net.layer_sizes()[l + 1]);
    for (double& m : masks[l]) m = u(rng) < p ? 0.0 : keep_scale;
  }
  return masks;
}

ForwardTrace run_forward(const Mlp& net, std::span<const double> inputs, std::size_t batch,
                         std::vector<std::vector<double>> masks) {
  const auto& k = simd::active();
  const auto& sizes = net.layer_sizes();
  ForwardTrace tr;
  tr.net_tag = net.tag();
  tr.batch = batch;
  tr.masks = std::move(masks);
  tr.layer_inputs.resize(net.num_layers());
  tr.layer_inputs[0].assign(inputs.begin(), inputs.end());
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    const std::size_t n_in = sizes[l];
    const std::size_t n_out = sizes[l + 1];
    const double* w = net.weights(l).data();
    const double* b = net.bias(l).data();
    const double* x = tr.layer_inputs[l].data();
    const bool last = l + 1 == net.num_layers();
    std::vector<double>& y = last ? tr.output : tr.layer_inputs[l + 1];
    y.resize(batch * n_out);
    for (std::size_t s = 0; s < batch; ++s) {
      const double* xs = x + s * n_in;
      double* ys = y.data() + s * n_out;
      for (std::size_t o = 0; o < n_out; ++o) ys[o] = k.dot(w + o * n_in, xs, n_in) + b[o];
    }
    if (last) {
      if (net.output_activation() == OutputActivation::Tanh) {
        for (double& v : y) v = std::tanh(v);
      }
    } else if (tr.masks.empty()) {
      for (double& v : y) v = v > 0.0 ? v : 0.0;
    } else {
      const auto& m = tr.masks[l];
      for (std::size_t i = 0; i < y.size(); ++i) y[i] = (y[i] > 0.0 ? y[i] : 0.0) * m[i];
    }
  }
  return tr;
}

}  // namespace

Mlp::Mlp(std::vector<std::size_t> layer_sizes, OutputActivation output, double dropout_p)
    : sizes_(std::move(layer_sizes)), output_(output), dropout_p_(dropout_p), tag_(next_tag()) {
  if (sizes_.size() < 2) throw UsageError("an MLP needs at least input and output sizes");
  for (auto s : sizes_) {
    if (s == 0) throw UsageError("layer sizes must be positive");
  }
  if (!(dropout_p_ >= 0.0 && dropout_p_ < 1.0)) throw UsageError("dropout_p must lie in [0, 1)");
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    offsets_.push_back(total);
    total += sizes_[l] * sizes_[l + 1] + sizes_[l + 1];
  }
  params_.assign(total, 0.0);
}

Mlp::Mlp(const Mlp& other)
    : sizes_(other.sizes_),
      output_(other.output_),
      dropout_p_(other.dropout_p_),
      params_(other.params_),
      offsets_(other.offsets_),
      tag_(next_tag()) {}

Mlp& Mlp::operator=(const Mlp& other) {
  if (this != &other) {
    sizes_ = other.sizes_;
    output_ = other.output_;
    dropout_p_ = other.dropout_p_;
    params_ = other.params_;
    offsets_ = other.offsets_;
    tag_ = next_tag();
  }
  return *this;
}

Mlp Mlp::initialized(std::vector<std::size_t> layer_sizes, OutputActivation output,
                     double dropout_p, Rng& rng) {
  Mlp net(std::move(layer_sizes), output, dropout_p);
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    auto w = net.weights(l);
    auto b = net.bias(l);
    if (l + 1 == net.num_layers()) {
      std::uniform_real_distribution<double> u(-1e-3, 1e-3);
      for (double& x : w) x = u(rng);
      for (double& x : b) x = u(rng);
    } else {
      std::normal_distribution<double> n(0.0, std::sqrt(2.0 / static_cast<double>(net.sizes_[l])));
      for (double& x : w) x = n(rng);
    }
  }
  return net;
}

std::span<double> Mlp::weights(std::size_t l) {
  return std::span<double>(params_).subspan(offsets_[l], sizes_[l] * sizes_[l + 1]);
}
std::span<const double> Mlp::weights(std::size_t l) const {
  return std::span<const double>(params_).subspan(offsets_[l], sizes_[l] * sizes_[l + 1]);
}
std::span<double> Mlp::bias(std::size_t l) {
  return std::span<double>(params_).subspan(bias_offset(l), sizes_[l + 1]);
}
std::span<const double> Mlp::bias(std::size_t l) const {
  return std::span<const double>(params_).subspan(bias_offset(l), sizes_[l + 1]);
}

ForwardTrace forward(const Mlp& net, std::span<const double> inputs, std::size_t batch,
                     DropoutMode mode) {
  check_input(net, inputs, batch);
  std::vector<std::vector<double>> masks;
  if (mode.is_stochastic()) masks = draw_masks(net, batch, mode.rng());
  return run_forward(net, inputs, batch, std::move(masks));
}

ForwardTrace forward_masked(const Mlp& net, std::span<const double> inputs, std::size_t batch,
                            const std::vector<std::vector<double>>& masks) {
  check_input(net, inputs, batch);
  if (masks.size() != net.num_layers() - 1) throw UsageError("mask count does not match layers");
  for (std::size_t l = 0; l < masks.size(); ++l) {
    if (masks[l].size() != batch * net.layer_sizes()[l + 1]) {
      throw UsageError("mask shape does not match layer " + std::to_string(l));
    }
  }
  return run_forward(net, inputs, batch, masks);
}

std::vector<double> forward(const Mlp& net, std::span<const double> input, DropoutMode mode) {
  return forward(net, input, 1, mode).output;
}

Gradients backward(const Mlp& net, const ForwardTrace& trace, std::span<const double> upstream,
                   BackwardOptions options) {
  if (trace.net_tag != net.tag()) {
    throw UsageError("backward: trace was recorded by a different network");
  }
  const auto& sizes = net.layer_sizes();
  const std::size_t batch = trace.batch;
  if (trace.layer_inputs.size() != net.num_layers() ||
      trace.output.size() != batch * net.output_dim() ||
      (!trace.masks.empty() && trace.masks.size() != net.num_layers() - 1)) {
    throw UsageError("backward: trace shape does not match the network");
  }
  if (upstream.size() != trace.output.size()) {
    throw UsageError("backward: upstream gradient has the wrong size");
  }
  const auto& k = simd::active();

  Gradients g;
  if (options.param_grads) g.params.assign(net.params().size(), 0.0);

  // delta = dL/dz for the current layer
  std::vector<double> delta(upstream.begin(), upstream.end());
  if (net.output_activation() == OutputActivation::Tanh) {
    for (std::size_t i = 0; i < delta.size(); ++i) {
      const double y = trace.output[i];
      delta[i] *= 1.0 - y * y;
    }
  }
  std::vector<double> dx;
  for (std::size_t l = net.num_layers(); l-- > 0;) {
    const std::size_t n_in = sizes[l];
    const std::size_t n_out = sizes[l + 1];
    const double* x = trace.layer_inputs[l].data();
    const double* w = net.weights(l).data();
    if (options.param_grads) {
      double* gw = g.params.data() + net.weight_offset(l);
      double* gb = g.params.data() + net.bias_offset(l);
      for (std::size_t s = 0; s < batch; ++s) {
        const double* ds = delta.data() + s * n_out;
        for (std::size_t o = 0; o < n_out; ++o) {
          if (ds[o] == 0.0) continue;
          k.axpy(ds[o], x + s * n_in, gw + o * n_in, n_in);
          gb[o] += ds[o];
        }
      }
    }
    if (l == 0 && !options.input_grads) break;
    dx.assign(batch * n_in, 0.0);
    for (std::size_t s = 0; s < batch; ++s) {
      const double* ds = delta.data() + s * n_out;
      double* dxs = dx.data() + s * n_in;
      for (std::size_t o = 0; o < n_out; ++o) {
        if (ds[o] == 0.0) continue;
        k.axpy(ds[o], w + o * n_in, dxs, n_in);
      }
    }
    if (l == 0) {
      g.input = std::move(dx);
      break;
    }
    // Through ReLU and the dropout mask of hidden layer l-1; x holds its output.
    const std::vector<double>* mask = trace.masks.empty() ? nullptr : &trace.masks[l - 1];
    for (std::size_t i = 0; i < dx.size(); ++i) {
      if (x[i] > 0.0) {
        dx[i] *= mask ? (*mask)[i] : 1.0;
      } else {
        dx[i] = 0.0;
      }
    }
    delta.swap(dx);
  }
  return g;
}

void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads) {
  if (params.size() != grads.size()) throw UsageError("adam_step: shape mismatch");
  if (state.m.size() != params.size()) {
    if (state.step != 0 || !state.m.empty()) throw UsageError("adam_step: state shape mismatch");
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  simd::AdamCoeffs c{state.learning_rate, state.beta1, state.beta2, state.eps,
                     1.0 - std::pow(state.beta1, t), 1.0 - std::pow(state.beta2, t)};
  simd::adam(c, grads, params, state.m, state.v);
}

McStatistics mc_statistics(const Mlp& net, std::span<const double> input, std::size_t n_passes,
                           std::uint64_t seed) {
  if (n_passes < 2) throw UsageError("mc_statistics needs at least 2 passes");
  if (input.size() != net.input_dim()) throw UsageError("mc_statistics: input size mismatch");
  std::vector<double> batch(n_passes * input.size());
  for (std::size_t s = 0; s < n_passes; ++s) {
    std::copy(input.begin(), input.end(), batch.begin() + static_cast<std::ptrdiff_t>(s * input.size()));
  }
  Rng rng(seed);
  const ForwardTrace tr = forward(net, batch, n_passes, DropoutMode::stochastic(rng));
  const std::size_t d = net.output_dim();
  McStatistics st;
  st.mean.assign(d, 0.0);
  std::vector<double> m2(d, 0.0);
  // Welford: identical samples give exactly the sample and zero variance.
  for (std::size_t s = 0; s < n_passes; ++s) {
    const double count = static_cast<double>(s + 1);
    for (std::size_t j = 0; j < d; ++j) {
      const double y = tr.output[s * d + j];
      const double delta = y - st.mean[j];
      st.mean[j] += delta / count;
      m2[j] += delta * (y - st.mean[j]);
    }
  }
  st.variance.resize(d);
  for (std::size_t j = 0; j < d; ++j) st.variance[j] = m2[j] / static_cast<double>(n_passes);
  return st;
}

}  // namespace rrnav
