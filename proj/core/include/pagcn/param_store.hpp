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

#include <optional>
#include <string>
#include <vector>

#include "pagcn/checkpoint.hpp"
#include "pagcn/matrix.hpp"
#include "pagcn/numerics.hpp"

namespace pagcn {

// Named parameter matrices addressed by slot index. Sharing a parameter
// between graphs means handing both graphs the same slot.
class ParamStore {
 public:
  std::size_t add(std::string name, Matrix value);

  std::size_t size() const { return values_.size(); }
  Matrix& at(std::size_t slot) { return values_.at(slot); }
  const Matrix& at(std::size_t slot) const { return values_.at(slot); }
  const std::string& name(std::size_t slot) const { return names_.at(slot); }
  std::optional<std::size_t> find(const std::string& name) const;

  // One zero matrix per slot, shaped like the parameter.
  std::vector<Matrix> zero_gradients() const;

  void append_to(Checkpoint& checkpoint) const;
  // Overwrites every slot from the checkpoint; names and shapes must match.
  void load_from(const Checkpoint& checkpoint);

  bool operator==(const ParamStore&) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<Matrix> values_;
};

// One Adam state per parameter slot.
class StoreOptimizer {
 public:
  StoreOptimizer(const ParamStore& store, AdamConfig config);

  void step(ParamStore& store, const std::vector<Matrix>& gradients);

 private:
  std::vector<AdamState> states_;
};

}  // namespace pagcn
