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

#include <cstring>
#include <random>
#include <vector>

#include "doctest.h"
#include "rrnav/simd.hpp"

namespace {

using rrnav::simd::Backend;
using rrnav::simd::KernelTable;

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

}  // namespace

TEST_SUITE("simd") {

TEST_CASE("scalar kernels compute the textbook formulas") {
  const auto& s = rrnav::simd::table(Backend::Scalar);
  const std::vector<double> a{1, 2, 3, 4, 5};
  const std::vector<double> b{5, 4, 3, 2, 1};
  CHECK(s.dot(a.data(), b.data(), a.size()) == doctest::Approx(35.0));

  std::vector<double> y{1, 1, 1, 1, 1};
  s.axpy(2.0, a.data(), y.data(), y.size());
  CHECK(y == std::vector<double>{3, 5, 7, 9, 11});

  std::vector<double> dst{0, 0, 0, 0, 0};
  s.polyak(0.25, a.data(), dst.data(), dst.size());
  CHECK(dst[3] == doctest::Approx(1.0));
}

TEST_CASE("avx2 kernels are bitwise identical to scalar ones") {
  if (!rrnav::simd::backend_supported(Backend::Avx2)) {
    MESSAGE("AVX2 not available; only the scalar backend is exercised");
    return;
  }
  const KernelTable& s = rrnav::simd::table(Backend::Scalar);
  const KernelTable& v = rrnav::simd::table(Backend::Avx2);
  std::mt19937_64 rng(2024);
  // Lengths straddle the vector width and the unrolled block size.
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 15u, 16u, 17u, 31u, 64u, 257u, 1000u}) {
    CAPTURE(n);
    const auto a = random_vec(n, rng, 3.0);
    const auto b = random_vec(n, rng, 3.0);
    CHECK(same_bits(s.dot(a.data(), b.data(), n), v.dot(a.data(), b.data(), n)));

    auto y1 = random_vec(n, rng);
    auto y2 = y1;
    s.axpy(-0.37, a.data(), y1.data(), n);
    v.axpy(-0.37, a.data(), y2.data(), n);
    CHECK(same_bits(y1, y2));

    auto d1 = random_vec(n, rng);
    auto d2 = d1;
    s.polyak(0.005, a.data(), d1.data(), n);
    v.polyak(0.005, a.data(), d2.data(), n);
    CHECK(same_bits(d1, d2));

    auto p1 = random_vec(n, rng);
    auto m1 = random_vec(n, rng, 0.1);
    auto v1 = random_vec(n, rng, 0.1);
    for (auto& x : v1) x = x * x;
    auto p2 = p1, m2 = m1, v2 = v1;
    const rrnav::simd::AdamCoeffs c{1e-3, 0.9, 0.999, 1e-8, 1.0 - 0.9 * 0.9, 1.0 - 0.999 * 0.999};
    s.adam(c, a.data(), p1.data(), m1.data(), v1.data(), n);
    v.adam(c, a.data(), p2.data(), m2.data(), v2.data(), n);
    CHECK(same_bits(p1, p2));
    CHECK(same_bits(m1, m2));
    CHECK(same_bits(v1, v2));
  }
}

TEST_CASE("backend can be switched at runtime") {
  const Backend before = rrnav::simd::active().backend;
  rrnav::simd::set_backend(Backend::Scalar);
  CHECK(rrnav::simd::active().backend == Backend::Scalar);
  CHECK(rrnav::simd::active().name == "scalar");
  if (rrnav::simd::backend_supported(before)) rrnav::simd::set_backend(before);
}

}  // TEST_SUITE
