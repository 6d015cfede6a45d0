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

#include "rrnav/checkpoint.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "rrnav/errors.hpp"

namespace rrnav {
namespace {

constexpr char kMagic[8] = {'R', 'R', 'N', 'V', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::string& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  out.append(reinterpret_cast<const char*>(buf), sizeof(T));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > bytes_.size()) throw ParseError("checkpoint: truncated file");
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, bytes_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
    pos_ += sizeof(T);
    T value;
    std::memcpy(&value, buf, sizeof(T));
    return value;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_checkpoint(const Mlp& net, ObservationMode mode) {
  std::string out(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kVersion);
  put<std::uint8_t>(out, mode == ObservationMode::Residual ? 0 : 1);
  put<std::uint8_t>(out, 0);
  put<std::uint8_t>(out, net.output_activation() == OutputActivation::Tanh ? 0 : 1);
  put<std::uint8_t>(out, 0);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(net.layer_sizes().size()));
  for (auto s : net.layer_sizes()) put<std::uint32_t>(out, static_cast<std::uint32_t>(s));
  put<double>(out, net.dropout_p());
  put<std::uint64_t>(out, net.params().size());
  for (double p : net.params()) put<double>(out, p);
  return out;
}

Checkpoint decode_checkpoint(const std::string& bytes) {
  if (bytes.size() < sizeof(kMagic) || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw ParseError("checkpoint: bad magic (not a ckpt/1 file)");
  }
  Reader r(bytes);
  for (std::size_t i = 0; i < sizeof(kMagic); ++i) r.get<char>();
  const auto version = r.get<std::uint32_t>();
  if (version != kVersion) throw ParseError("checkpoint: unsupported version " + std::to_string(version));
  const auto mode = r.get<std::uint8_t>();
  const auto hidden = r.get<std::uint8_t>();
  const auto output = r.get<std::uint8_t>();
  r.get<std::uint8_t>();
  if (mode > 1 || hidden != 0 || output > 1) throw ParseError("checkpoint: bad header tags");
  const auto n_sizes = r.get<std::uint32_t>();
  if (n_sizes < 2 || n_sizes > 64) throw ParseError("checkpoint: bad layer count");
  std::vector<std::size_t> sizes(n_sizes);
  for (auto& s : sizes) s = r.get<std::uint32_t>();
  const double dropout = r.get<double>();
  Checkpoint ck;
  try {
    ck.net = Mlp(sizes, output == 0 ? OutputActivation::Tanh : OutputActivation::Identity, dropout);
  } catch (const UsageError& e) {
    throw ParseError(std::string("checkpoint: ") + e.what());
  }
  ck.mode = mode == 0 ? ObservationMode::Residual : ObservationMode::EndToEnd;
  const auto n_params = r.get<std::uint64_t>();
  if (n_params != ck.net.params().size()) throw ParseError("checkpoint: parameter count mismatch");
  for (double& p : ck.net.params()) p = r.get<double>();
  if (!r.done()) throw ParseError("checkpoint: trailing bytes");
  return ck;
}

void save_checkpoint(const std::filesystem::path& path, const Mlp& net, ObservationMode mode) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write checkpoint " + path.string());
  const std::string bytes = encode_checkpoint(net, mode);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open checkpoint " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

}  // namespace rrnav
