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

#include <filesystem>
#include <string>

#include "rrnav/env.hpp"
#include "rrnav/nn.hpp"

namespace rrnav {

// ckpt/1 binary layout, all integers and floats little-endian:
//   char[8]  magic "RRNVCKPT"
//   u32      format version (1)
//   u8       mode: 0 residual, 1 end_to_end
//   u8       hidden activation: 0 relu
//   u8       output activation: 0 tanh, 1 identity
//   u8       reserved (0)
//   u32      number of layer sizes L, then L x u32 sizes
//   f64      dropout_p
//   u64      parameter count P, then P x f64 parameters in Mlp::params() order
struct Checkpoint {
  Mlp net;
  ObservationMode mode = ObservationMode::Residual;
};

std::string encode_checkpoint(const Mlp& net, ObservationMode mode);
Checkpoint decode_checkpoint(const std::string& bytes);

void save_checkpoint(const std::filesystem::path& path, const Mlp& net, ObservationMode mode);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace rrnav
