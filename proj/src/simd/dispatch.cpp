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

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "rrnav/simd.hpp"

namespace rrnav::simd {
namespace {

const KernelTable* pick_default() {
  std::string pref = "auto";
  if (const char* env = std::getenv("RRNAV_SIMD")) pref = env;
  if (pref == "scalar") return &detail::kScalarTable;
  if (pref == "avx2") return &table(Backend::Avx2);
  if (pref != "auto") {
    throw std::invalid_argument("RRNAV_SIMD must be scalar, avx2 or auto, got '" + pref + "'");
  }
  return backend_supported(Backend::Avx2) ? &table(Backend::Avx2)
                                          : &detail::kScalarTable;
}

std::atomic<const KernelTable*> g_active{nullptr};

}  // namespace

bool backend_supported(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#if defined(RRNAV_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Backend b) {
  if (!backend_supported(b)) {
    throw std::runtime_error("SIMD backend not supported on this CPU/build");
  }
#if defined(RRNAV_HAVE_AVX2)
  if (b == Backend::Avx2) return detail::kAvx2Table;
#endif
  return detail::kScalarTable;
}

const KernelTable& active() {
  const KernelTable* t = g_active.load(std::memory_order_acquire);
  if (t == nullptr) {
    t = pick_default();
    g_active.store(t, std::memory_order_release);
  }
  return *t;
}

void set_backend(Backend b) { g_active.store(&table(b), std::memory_order_release); }

}  // namespace rrnav::simd
