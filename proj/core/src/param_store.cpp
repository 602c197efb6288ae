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

#include "pagcn/param_store.hpp"

#include "pagcn/errors.hpp"

namespace pagcn {

std::size_t ParamStore::add(std::string name, Matrix value) {
  if (find(name)) throw ContractError("duplicate parameter name '" + name + "'");
  names_.push_back(std::move(name));
  values_.push_back(std::move(value));
  return values_.size() - 1;
}

std::optional<std::size_t> ParamStore::find(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

std::vector<Matrix> ParamStore::zero_gradients() const {
  std::vector<Matrix> out;
  out.reserve(values_.size());
  for (const Matrix& v : values_) out.emplace_back(v.rows(), v.cols());
  return out;
}

void ParamStore::append_to(Checkpoint& checkpoint) const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    checkpoint.matrices.emplace_back(names_[i], values_[i]);
  }
}

void ParamStore::load_from(const Checkpoint& checkpoint) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const Matrix& stored = checkpoint.get(names_[i]);
    if (!stored.same_shape(values_[i])) {
      throw ContractError("checkpoint matrix '" + names_[i] + "' is " +
                          stored.shape_string() + ", expected " +
                          values_[i].shape_string());
    }
    values_[i] = stored;
  }
}

StoreOptimizer::StoreOptimizer(const ParamStore& store, AdamConfig config) {
  states_.reserve(store.size());
  for (std::size_t i = 0; i < store.size(); ++i) {
    states_.push_back(AdamState::for_parameter(store.at(i), config));
  }
}

void StoreOptimizer::step(ParamStore& store, const std::vector<Matrix>& gradients) {
  if (gradients.size() != store.size()) {
    throw ContractError("optimizer: gradient count does not match parameters");
  }
  for (std::size_t i = 0; i < store.size(); ++i) {
    adam_step(store.at(i), gradients[i], states_[i]);
  }
}

}  // namespace pagcn
