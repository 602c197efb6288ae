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

#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "pagcn/errors.hpp"
#include "pagcn/synthetic.hpp"

namespace pagcn {
namespace {

TEST(SyntheticPairTest, NoAlignmentAtRhoZero) {
  SyntheticPairSpec s;
  s.rho = 0.0;
  const SyntheticPair p = generate_synthetic_pair(s);
  EXPECT_TRUE(p.alignment.pairs.empty());
}

TEST(SyntheticPairTest, FullKeepNoNoiseGivesIdenticalViews) {
  SyntheticPairSpec s;
  s.rho = 1.0;
  s.keep = 1.0;
  s.feature_noise = 0.0;
  s.permute_b = false;
  const SyntheticPair p = generate_synthetic_pair(s);
  EXPECT_EQ(p.a.adjacency, p.b.adjacency);
  EXPECT_EQ(p.a.features, p.b.features);
  EXPECT_EQ(p.a.adjacency, p.world.adjacency);
  EXPECT_EQ(p.alignment.num_positive(), p.a.num_nodes());
  for (const AlignedPair& ap : p.alignment.pairs) {
    if (ap.label == 1) EXPECT_EQ(ap.a, ap.b);
  }
}

TEST(SyntheticPairTest, PermutationIsConsistent) {
  SyntheticPairSpec s;
  s.feature_noise = 0.0;
  s.keep = 1.0;
  const SyntheticPair p = generate_synthetic_pair(s);
  const std::size_t n = p.a.num_nodes();
  ASSERT_EQ(p.b_to_world.size(), n);
  EXPECT_EQ(std::set<std::size_t>(p.b_to_world.begin(), p.b_to_world.end()).size(), n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      EXPECT_EQ(p.b.adjacency(i, j), p.world.adjacency(p.b_to_world[i], p.b_to_world[j]));
    }
  }
  for (const AlignedPair& ap : p.alignment.pairs) {
    if (ap.label == 1) EXPECT_EQ(p.b_to_world[ap.b], ap.a);
  }
}

TEST(SyntheticPairTest, DefaultSpecSizesAndAlignment) {
  const SyntheticPair p = generate_synthetic_pair(SyntheticPairSpec{});
  EXPECT_EQ(p.a.num_nodes(), 200u);
  EXPECT_EQ(p.a.features.cols(), 4u);
  EXPECT_EQ(p.alignment.num_positive(), 20u);
  EXPECT_EQ(p.alignment.pairs.size(), 40u);
  EXPECT_NO_THROW(p.a.validate());
  EXPECT_NO_THROW(p.b.validate());
  EXPECT_NO_THROW(p.alignment.validate());
}

TEST(SyntheticPairTest, DefaultViewsAreUsuallyConnected) {
  std::size_t connected = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SyntheticPairSpec s;
    s.seed = seed;
    const SyntheticPair p = generate_synthetic_pair(s);
    if (is_connected(p.a) && is_connected(p.b)) ++connected;
  }
  EXPECT_GE(connected, 95u);
}

TEST(SyntheticPairTest, DeterministicPerSeed) {
  SyntheticPairSpec s;
  s.seed = 12;
  const SyntheticPair a = generate_synthetic_pair(s);
  const SyntheticPair b = generate_synthetic_pair(s);
  EXPECT_EQ(a.a.adjacency, b.a.adjacency);
  EXPECT_EQ(a.b.features, b.b.features);
  EXPECT_EQ(a.alignment.pairs, b.alignment.pairs);
  s.seed = 13;
  EXPECT_NE(generate_synthetic_pair(s).a.adjacency, a.a.adjacency);
}

TEST(SyntheticPairTest, SubCommunitiesWidenFeatures) {
  SyntheticPairSpec s;
  s.sub_blocks = 5;
  s.sub_contrast = 0.5;
  const SyntheticPair p = generate_synthetic_pair(s);
  EXPECT_EQ(p.a.features.cols(), 20u);
  EXPECT_EQ(*std::max_element(p.community.begin(), p.community.end()), 19u);
}

TEST(SyntheticPairTest, InvalidSpecs) {
  SyntheticPairSpec s;
  s.blocks = 0;
  EXPECT_THROW(generate_synthetic_pair(s), ContractError);
  s = {};
  s.p_intra = 1.5;
  EXPECT_THROW(generate_synthetic_pair(s), ContractError);
  s = {};
  s.rho = -0.1;
  EXPECT_THROW(generate_synthetic_pair(s), ContractError);
  s = {};
  s.sub_blocks = 3;
  EXPECT_THROW(generate_synthetic_pair(s), ContractError);
}

TEST(SyntheticRelationalTest, RelationsFollowBlockPairs) {
  SyntheticPairSpec s;
  s.relations = 3;
  const SyntheticRelationalPair p = generate_synthetic_relational_pair(s);
  EXPECT_EQ(p.a.num_relations, 3u);
  EXPECT_NO_THROW(p.a.validate());
  EXPECT_NO_THROW(p.b.validate());
  for (const Triple& t : p.a.triples) {
    const std::size_t lo = std::min(p.block[t.head], p.block[t.tail]);
    const std::size_t hi = std::max(p.block[t.head], p.block[t.tail]);
    EXPECT_EQ(t.relation, (lo * s.blocks + hi) % s.relations);
  }
  EXPECT_EQ(p.alignment.num_positive(), 20u);
}

}  // namespace
}  // namespace pagcn
