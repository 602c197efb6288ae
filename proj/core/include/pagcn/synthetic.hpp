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

#include <cstdint>
#include <vector>

#include "pagcn/graph.hpp"

namespace pagcn {

// A latent stochastic block model "world" observed through two views.
// Each block is further split into `sub_blocks` equal communities. Within a
// block, pairs in the same community have probability p_intra (1 + c (S - 1))
// and other pairs p_intra (1 - c), with c = sub_contrast, so the mean
// within-block probability stays p_intra. c = 0 or S = 1 is a plain SBM.
struct SyntheticPairSpec {
  std::size_t blocks = 4;
  std::size_t nodes_per_block = 50;
  double p_intra = 0.2;
  double p_inter = 0.02;
  double keep = 0.7;   // per-view probability of keeping a world edge
  double rho = 0.1;    // fraction of nodes exposed as alignment positives
  std::size_t sub_blocks = 1;     // S, must divide nodes_per_block
  double sub_contrast = 0.0;      // c in [0, 1]
  double feature_signal = 1.0;    // weight of the community indicator
  double feature_noise = 1.0;     // per-view Gaussian noise on features
  double alignment_negative_ratio = 1.0;
  bool permute_b = true;        // shuffle node order of the second view
  std::size_t relations = 3;    // relation task only
  std::uint64_t seed = 0;

  void validate() const;  // throws ContractError
};

struct SyntheticPair {
  Graph world;
  Graph a;
  Graph b;
  Alignment alignment;                // a -> b, positives then negatives
  std::vector<std::size_t> block;     // block of each world node
  std::vector<std::size_t> community;  // community of each world node
  std::vector<std::size_t> b_to_world;  // node of view b -> world node
};

// Both views contain every world node. Edges are kept independently with
// probability `keep` per view. Features are feature_signal times the
// one-hot community (blocks * sub_blocks columns) plus independent Gaussian
// noise per view.
SyntheticPair generate_synthetic_pair(const SyntheticPairSpec& spec);

struct SyntheticRelationalPair {
  RelationalGraph a;
  RelationalGraph b;
  Alignment alignment;
  std::vector<std::size_t> block;
  std::vector<std::size_t> b_to_world;
};

// Same world and views; each world edge carries a relation determined by
// its unordered block pair, so relations are predictable from structure.
SyntheticRelationalPair generate_synthetic_relational_pair(const SyntheticPairSpec& spec);

bool is_connected(const Graph& g);

}  // namespace pagcn
