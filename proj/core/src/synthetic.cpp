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

#include "pagcn/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "pagcn/errors.hpp"
#include "pagcn/random.hpp"

namespace pagcn {
namespace {

bool in_unit(double p) { return p >= 0.0 && p <= 1.0; }

struct Views {
  std::vector<std::pair<std::size_t, std::size_t>> world_edges;
  std::vector<std::size_t> block;
  std::vector<std::size_t> b_to_world;
  std::vector<std::size_t> world_to_b;
  std::vector<std::pair<std::size_t, std::size_t>> edges_a;  // world indices
  std::vector<std::pair<std::size_t, std::size_t>> edges_b;
  std::vector<std::size_t> community;
  Matrix features_a;
  Matrix features_b;
  Alignment alignment;
};

Views sample_views(const SyntheticPairSpec& spec) {
  spec.validate();
  const std::size_t n = spec.blocks * spec.nodes_per_block;
  Views v;
  v.block.resize(n);
  for (std::size_t i = 0; i < n; ++i) v.block[i] = i / spec.nodes_per_block;

  const std::size_t per_community = spec.nodes_per_block / spec.sub_blocks;
  v.community.resize(n);
  for (std::size_t i = 0; i < n; ++i) v.community[i] = i / per_community;
  const double c = spec.sub_blocks > 1 ? spec.sub_contrast : 0.0;
  const double p_same = spec.p_intra * (1.0 + c * static_cast<double>(spec.sub_blocks - 1));
  const double p_other = spec.p_intra * (1.0 - c);
  Rng world_rng(derive_seed(spec.seed, "world"));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double p = spec.p_inter;
      if (v.block[i] == v.block[j]) p = v.community[i] == v.community[j] ? p_same : p_other;
      if (uniform_real(world_rng, 0.0, 1.0) < std::min(p, 1.0)) v.world_edges.emplace_back(i, j);
    }
  }

  Rng rng_a(derive_seed(spec.seed, "view-a"));
  Rng rng_b(derive_seed(spec.seed, "view-b"));
  for (const auto& e : v.world_edges) {
    if (uniform_real(rng_a, 0.0, 1.0) < spec.keep) v.edges_a.push_back(e);
    if (uniform_real(rng_b, 0.0, 1.0) < spec.keep) v.edges_b.push_back(e);
  }

  v.b_to_world.resize(n);
  std::iota(v.b_to_world.begin(), v.b_to_world.end(), 0);
  if (spec.permute_b) {
    Rng perm_rng(derive_seed(spec.seed, "permutation"));
    std::shuffle(v.b_to_world.begin(), v.b_to_world.end(), perm_rng);
  }
  v.world_to_b.resize(n);
  for (std::size_t i = 0; i < n; ++i) v.world_to_b[v.b_to_world[i]] = i;

  const std::size_t m = spec.blocks * spec.sub_blocks;
  auto features = [&](Rng& rng) {
    std::normal_distribution<double> noise(0.0, 1.0);
    Matrix x(n, m);
    for (std::size_t i = 0; i < n; ++i) {
      x(i, v.community[i]) = spec.feature_signal;
      for (double& value : x.row(i)) value += spec.feature_noise * noise(rng);
    }
    return x;
  };
  Rng feat_a(derive_seed(spec.seed, "features-a"));
  Rng feat_b(derive_seed(spec.seed, "features-b"));
  v.features_a = features(feat_a);
  const Matrix world_order_b = features(feat_b);
  v.features_b = Matrix(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    const auto src = world_order_b.row(v.b_to_world[i]);
    std::copy(src.begin(), src.end(), v.features_b.row(i).begin());
  }

  // Alignment positives: a rho fraction of world nodes, chosen at random.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng align_rng(derive_seed(spec.seed, "alignment"));
  std::shuffle(order.begin(), order.end(), align_rng);
  const auto aligned = static_cast<std::size_t>(spec.rho * static_cast<double>(n) + 0.5);
  v.alignment.n_a = n;
  v.alignment.n_b = n;
  std::vector<std::size_t> chosen(order.begin(), order.begin() + aligned);
  std::sort(chosen.begin(), chosen.end());
  for (std::size_t w : chosen) v.alignment.pairs.push_back({w, v.world_to_b[w], 1});
  add_alignment_negatives(v.alignment, spec.alignment_negative_ratio,
                          derive_seed(spec.seed, "alignment-negatives"));
  return v;
}

std::vector<std::string> ids(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

// Relation of a world edge: index of the unordered block pair modulo the
// relation count.
std::size_t relation_of(std::size_t bi, std::size_t bj, std::size_t blocks,
                        std::size_t relations) {
  const std::size_t lo = std::min(bi, bj);
  const std::size_t hi = std::max(bi, bj);
  const std::size_t pair_index = lo * blocks + hi;
  return pair_index % relations;
}

}  // namespace

void SyntheticPairSpec::validate() const {
  if (blocks == 0 || nodes_per_block == 0) {
    throw ContractError("synthetic pair needs at least one block with one node");
  }
  if (!in_unit(p_intra) || !in_unit(p_inter) || !in_unit(keep)) {
    throw ContractError("edge probabilities must lie in [0, 1]");
  }
  if (!in_unit(rho)) throw ContractError("rho must lie in [0, 1]");
  if (sub_blocks == 0 || nodes_per_block % sub_blocks != 0) {
    throw ContractError("sub_blocks must divide nodes_per_block");
  }
  if (!in_unit(sub_contrast)) throw ContractError("sub_contrast must lie in [0, 1]");
  if (!(feature_noise >= 0.0)) throw ContractError("feature_noise must be >= 0");
  if (!(alignment_negative_ratio >= 0.0)) {
    throw ContractError("alignment_negative_ratio must be >= 0");
  }
  if (relations == 0) throw ContractError("relations must be >= 1");
}

SyntheticPair generate_synthetic_pair(const SyntheticPairSpec& spec) {
  Views v = sample_views(spec);
  const std::size_t n = v.block.size();
  SyntheticPair out;
  std::vector<WeightedLink> world_links;
  for (const auto& [i, j] : v.world_edges) world_links.push_back({i, j, 1.0});
  out.world = Graph::from_links(n, world_links, v.features_a, ids("w", n));
  std::vector<WeightedLink> la;
  for (const auto& [i, j] : v.edges_a) la.push_back({i, j, 1.0});
  out.a = Graph::from_links(n, la, std::move(v.features_a), ids("a", n));
  std::vector<WeightedLink> lb;
  for (const auto& [i, j] : v.edges_b) lb.push_back({v.world_to_b[i], v.world_to_b[j], 1.0});
  out.b = Graph::from_links(n, lb, std::move(v.features_b), ids("b", n));
  out.alignment = std::move(v.alignment);
  out.block = std::move(v.block);
  out.b_to_world = std::move(v.b_to_world);
  out.community = std::move(v.community);
  return out;
}

SyntheticRelationalPair generate_synthetic_relational_pair(const SyntheticPairSpec& spec) {
  Views v = sample_views(spec);
  const std::size_t n = v.block.size();
  SyntheticRelationalPair out;
  auto build = [&](const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                   const std::vector<std::size_t>* remap, Matrix features,
                   const std::string& prefix) {
    RelationalGraph g;
    g.num_entities = n;
    g.num_relations = spec.relations;
    for (const auto& [i, j] : edges) {
      const std::size_t r = relation_of(v.block[i], v.block[j], spec.blocks, spec.relations);
      const std::size_t h = remap ? (*remap)[i] : i;
      const std::size_t t = remap ? (*remap)[j] : j;
      g.triples.push_back({h, t, r});
    }
    std::sort(g.triples.begin(), g.triples.end());
    g.features = std::move(features);
    g.entity_ids = ids(prefix, n);
    for (std::size_t r = 0; r < spec.relations; ++r) g.relation_names.push_back("r" + std::to_string(r));
    return g;
  };
  out.a = build(v.edges_a, nullptr, std::move(v.features_a), "a");
  out.b = build(v.edges_b, &v.world_to_b, std::move(v.features_b), "b");
  out.alignment = std::move(v.alignment);
  out.block = std::move(v.block);
  out.b_to_world = std::move(v.b_to_world);
  return out;
}

bool is_connected(const Graph& g) {
  const std::size_t n = g.num_nodes();
  if (n == 0) return true;
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack = {0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < n; ++j) {
      if (g.adjacency(i, j) > 0.0 && !seen[j]) {
        seen[j] = true;
        ++count;
        stack.push_back(j);
      }
    }
  }
  return count == n;
}

}  // namespace pagcn
