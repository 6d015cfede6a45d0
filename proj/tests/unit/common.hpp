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

// Small fixtures shared by the unit tests.

#include <cstdint>
#include <filesystem>
#include <string>

#include <unistd.h>

#include "rrnav/world.hpp"

namespace rrnav::testing {

// Open arena centered on the origin with small regions at both ends.
inline WorldSpec open_arena(double width = 10.0, double height = 10.0, double radius = 0.2) {
  WorldSpec w;
  w.width = width;
  w.height = height;
  w.robot_radius = radius;
  const double hw = 0.5 * width;
  w.start_region = Rect{-hw + 0.5, -0.5, -hw + 1.5, 0.5};
  w.goal_region = Rect{hw - 1.5, -0.5, hw - 0.5, 0.5};
  return w;
}

// Fresh scratch directory under the system temp path, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("rrnav_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace rrnav::testing
