// Copyright 2026 The pagcn Authors
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
#include <map>
#include <string>
#include <vector>

#include "pagcn/matrix.hpp"

namespace pagcn {

// Parameter checkpoint: a JSON document
//
//   {"format": "pagcn-checkpoint", "version": 1,
//    "metadata": {"key": "value", ...},
//    "matrices": [{"name": "...", "rows": r, "cols": c,
//                  "values": [row-major reals]}, ...]}
//
// Matrices keep their insertion order; reals round-trip exactly.
struct Checkpoint {
  static constexpr int kVersion = 1;

  std::map<std::string, std::string> metadata;
  std::vector<std::pair<std::string, Matrix>> matrices;

  const Matrix& get(const std::string& name) const;
};

std::string serialize_checkpoint(const Checkpoint& checkpoint);
Checkpoint parse_checkpoint(const std::string& text);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace pagcn
