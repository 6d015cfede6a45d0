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

#include <cstddef>
#include <span>
#include <string_view>

// Dense double-precision kernels used by the network code.
//
// Every backend evaluates in the same canonical order: dot products keep four
// interleaved partial sums (lane k accumulates elements i with i % 4 == k over
// the largest multiple of four), reduce them as (l0 + l2) + (l1 + l3), then add
// the tail sequentially. Elementwise kernels are plain per-element IEEE ops.
// With FMA contraction disabled this makes the scalar and AVX2 variants agree
// bit for bit, so results do not depend on the host CPU.

namespace rrnav::simd {

enum class Backend { Scalar, Avx2 };

struct AdamCoeffs {
  double learning_rate;
  double beta1;
  double beta2;
  double eps;
  double bias_correction1;  // 1 - beta1^t
  double bias_correction2;  // 1 - beta2^t
};

struct KernelTable {
  Backend backend;
  std::string_view name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // dst = tau * src + (1 - tau) * dst
  void (*polyak)(double tau, const double* src, double* dst, std::size_t n);
  void (*adam)(const AdamCoeffs& c, const double* grad, double* param,
               double* m, double* v, std::size_t n);
};

bool backend_supported(Backend b);

// Kernel table for a specific backend. Throws if the CPU lacks support.
const KernelTable& table(Backend b);

// Active table. Chosen on first use: RRNAV_SIMD=scalar|avx2|auto, default auto
// (AVX2 when the CPU reports it).
const KernelTable& active();

// Overrides the active backend; throws if unsupported.
void set_backend(Backend b);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

inline void polyak(double tau, std::span<const double> src, std::span<double> dst) {
  active().polyak(tau, src.data(), dst.data(), src.size());
}

inline void adam(const AdamCoeffs& c, std::span<const double> grad,
                 std::span<double> param, std::span<double> m,
                 std::span<double> v) {
  active().adam(c, grad.data(), param.data(), m.data(), v.data(), grad.size());
}

namespace detail {
extern const KernelTable kScalarTable;
#if defined(RRNAV_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif
}  // namespace detail

}  // namespace rrnav::simd
