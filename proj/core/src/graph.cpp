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

#include "pagcn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "pagcn/errors.hpp"
#include "pagcn/random.hpp"

namespace pagcn {
namespace {

bool is_link(const Graph& g, std::size_t i, std::size_t j) {
  return g.adjacency(i, j) > 0.0;
}

std::size_t count_non_links(const Graph& g) {
  const std::size_t n = g.num_nodes();
  const std::size_t all_pairs = n * (n - 1) / 2;
  return all_pairs - upper_links(g).size();
}

// Distinct uniform non-link pairs (i < j) not already in `taken`.
std::vector<NodePair> sample_distinct_non_links(const Graph& g,
                                                std::size_t count, Rng& rng,
                                                std::set<NodePair>& taken) {
  const std::size_t n = g.num_nodes();
  const std::size_t available = count_non_links(g);
  if (available < count + taken.size()) {
    throw SamplingError("cannot sample " + std::to_string(count) +
                        " negative pairs: only " + std::to_string(available) +
                        " non-links exist");
  }
  std::vector<NodePair> out;
  out.reserve(count);
  const std::size_t max_draws = 64 * count + 4096;
  std::size_t draws = 0;
  while (out.size() < count && draws < max_draws) {
    ++draws;
    std::size_t i = uniform_index(rng, n);
    std::size_t j = uniform_index(rng, n);
    if (i == j || is_link(g, i, j)) continue;
    if (i > j) std::swap(i, j);
    if (!taken.insert({i, j}).second) continue;
    out.push_back({i, j});
  }
  if (out.size() < count) {
    // Dense graph: enumerate the remaining candidates and shuffle.
    std::vector<NodePair> pool;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!is_link(g, i, j) && !taken.contains({i, j})) pool.push_back({i, j});
      }
    }
    std::shuffle(pool.begin(), pool.end(), rng);
    for (const NodePair& p : pool) {
      if (out.size() == count) break;
      taken.insert(p);
      out.push_back(p);
    }
  }
  return out;
}

template <typename T>
void partition_by_ratio(std::vector<T> items, SplitRatios ratios, Rng& rng,
                        std::vector<T>& train, std::vector<T>& validation,
                        std::vector<T>& test) {
  const std::size_t total = ratios.train + ratios.validation + ratios.test;
  if (total == 0) throw ContractError("split ratios sum to zero");
  std::shuffle(items.begin(), items.end(), rng);
  const std::size_t n_val = items.size() * ratios.validation / total;
  const std::size_t n_test = items.size() * ratios.test / total;
  validation.assign(items.begin(), items.begin() + n_val);
  test.assign(items.begin() + n_val, items.begin() + n_val + n_test);
  train.assign(items.begin() + n_val + n_test, items.end());
}

}  // namespace

void Graph::validate() const {
  const std::size_t n = adjacency.rows();
  if (adjacency.cols() != n) throw ContractError("adjacency must be square");
  if (features.rows() != n) {
    throw ContractError("feature rows " + std::to_string(features.rows()) +
                        " != node count " + std::to_string(n));
  }
  if (!node_ids.empty() && node_ids.size() != n) {
    throw ContractError("node id count does not match node count");
  }
  if (!all_finite(features)) throw ContractError("features must be finite");
  for (std::size_t i = 0; i < n; ++i) {
    if (adjacency(i, i) != 0.0) throw ContractError("adjacency diagonal must be zero");
    for (std::size_t j = 0; j < n; ++j) {
      const double w = adjacency(i, j);
      if (!std::isfinite(w) || w < 0.0) {
        throw ContractError("adjacency weights must be finite and >= 0");
      }
      if (w != adjacency(j, i)) throw ContractError("adjacency must be symmetric");
    }
  }
}

Graph Graph::from_links(std::size_t n, const std::vector<WeightedLink>& links,
                        Matrix features, std::vector<std::string> node_ids) {
  Graph g{Matrix(n, n), std::move(features), std::move(node_ids)};
  for (const WeightedLink& l : links) {
    if (l.i >= n || l.j >= n) throw ContractError("link endpoint out of range");
    if (l.i == l.j) throw ContractError("self-loop links are not allowed");
    if (l.weight < 0.0) throw ContractError("negative link weight");
    g.adjacency(l.i, l.j) += l.weight;
    g.adjacency(l.j, l.i) = g.adjacency(l.i, l.j);
  }
  return g;
}

std::vector<WeightedLink> upper_links(const Graph& g) {
  std::vector<WeightedLink> out;
  const std::size_t n = g.num_nodes();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (g.adjacency(i, j) > 0.0) out.push_back({i, j, g.adjacency(i, j)});
    }
  }
  return out;
}

Graph with_links(const Graph& g, const std::vector<WeightedLink>& links) {
  return Graph::from_links(g.num_nodes(), links, g.features, g.node_ids);
}

NormalizedAdjacency normalize_adjacency(const Matrix& adjacency,
                                        NormalizationExponent exponent) {
  const std::size_t n = adjacency.rows();
  if (adjacency.cols() != n) throw ContractError("adjacency must be square");
  Matrix a_tilde = adjacency;
  for (std::size_t i = 0; i < n; ++i) a_tilde(i, i) += 1.0;
  std::vector<double> scale(n);
  for (std::size_t i = 0; i < n; ++i) {
    double degree = 0.0;
    for (double w : a_tilde.row(i)) degree += w;
    scale[i] = exponent == NormalizationExponent::kNegativeHalf
                   ? 1.0 / std::sqrt(degree)
                   : std::sqrt(degree);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // Same operation order for (i, j) and (j, i) keeps the result exactly
      // symmetric.
      const double si = scale[std::min(i, j)];
      const double sj = scale[std::max(i, j)];
      a_tilde(i, j) = si * a_tilde(i, j) * sj;
    }
  }
  return NormalizedAdjacency{std::move(a_tilde)};
}

NormalizedAdjacency normalize_adjacency(const Graph& g,
                                        NormalizationExponent exponent) {
  return normalize_adjacency(g.adjacency, exponent);
}

void Alignment::validate() const {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const AlignedPair& p : pairs) {
    if (p.a >= n_a || p.b >= n_b) throw ContractError("alignment index out of range");
    if (p.label != 0 && p.label != 1) throw ContractError("alignment label must be 0 or 1");
    if (!seen.insert({p.a, p.b}).second) {
      throw ContractError("duplicate alignment entry (" + std::to_string(p.a) +
                          ", " + std::to_string(p.b) + ")");
    }
  }
}

std::size_t Alignment::num_positive() const {
  return static_cast<std::size_t>(std::count_if(
      pairs.begin(), pairs.end(), [](const AlignedPair& p) { return p.label == 1; }));
}

Matrix Alignment::positive_matrix() const {
  Matrix m(n_a, n_b);
  for (const AlignedPair& p : pairs) {
    if (p.label == 1) m(p.a, p.b) = 1.0;
  }
  return m;
}

Alignment Alignment::reversed() const {
  Alignment out{n_b, n_a, {}};
  out.pairs.reserve(pairs.size());
  for (const AlignedPair& p : pairs) out.pairs.push_back({p.b, p.a, p.label});
  return out;
}

void add_alignment_negatives(Alignment& alignment, double ratio,
                             std::uint64_t seed) {
  if (!(ratio >= 0.0)) throw ContractError("negative ratio must be >= 0");
  const auto wanted = static_cast<std::size_t>(
      std::llround(ratio * static_cast<double>(alignment.num_positive())));
  if (wanted == 0) return;
  std::set<std::pair<std::size_t, std::size_t>> taken;
  for (const AlignedPair& p : alignment.pairs) taken.insert({p.a, p.b});
  const std::size_t capacity = alignment.n_a * alignment.n_b;
  if (capacity < taken.size() + wanted) {
    throw SamplingError("alignment matrix too full to sample " +
                        std::to_string(wanted) + " negatives");
  }
  Rng rng(derive_seed(seed, "alignment-negatives"));
  std::size_t added = 0;
  while (added < wanted) {
    const std::size_t a = uniform_index(rng, alignment.n_a);
    const std::size_t b = uniform_index(rng, alignment.n_b);
    if (!taken.insert({a, b}).second) continue;
    alignment.pairs.push_back({a, b, 0});
    ++added;
  }
}

void RelationalGraph::validate() const {
  std::set<Triple> seen;
  for (const Triple& t : triples) {
    if (t.head >= num_entities || t.tail >= num_entities) {
      throw ContractError("triple entity index out of range");
    }
    if (t.relation >= num_relations) throw ContractError("triple relation out of range");
    if (!seen.insert(t).second) throw ContractError("duplicate triple");
  }
  if (features.rows() != num_entities) {
    throw ContractError("relational feature rows do not match entity count");
  }
}

LinkSplit split_links(const Graph& g, std::uint64_t seed, SplitRatios ratios) {
  std::vector<WeightedLink> links = upper_links(g);
  if (links.size() < 10) {
    throw ContractError("split_links needs at least 10 links, got " +
                        std::to_string(links.size()));
  }
  Rng rng(derive_seed(seed, "split-links"));
  LinkSplit split;
  partition_by_ratio(std::move(links), ratios, rng, split.train,
                     split.validation, split.test);
  std::set<NodePair> taken;
  split.negatives_validation =
      sample_distinct_non_links(g, split.validation.size(), rng, taken);
  split.negatives_test = sample_distinct_non_links(g, split.test.size(), rng, taken);
  return split;
}

std::vector<NodePair> sample_training_negatives(const Graph& g,
                                                std::size_t num_positives,
                                                std::size_t k_per_positive,
                                                std::uint64_t seed) {
  if (k_per_positive < 1) throw ContractError("k_per_positive must be >= 1");
  const std::size_t n = g.num_nodes();
  if (n < 2 || count_non_links(g) == 0) {
    throw SamplingError("graph has no non-link pairs to sample negatives from");
  }
  Rng rng(derive_seed(seed, "training-negatives"));
  const std::size_t wanted = num_positives * k_per_positive;
  std::vector<NodePair> out;
  out.reserve(wanted);
  const std::size_t max_draws = 256 * wanted + 4096;
  std::size_t draws = 0;
  while (out.size() < wanted) {
    if (++draws > max_draws) {
      throw SamplingError("negative sampling exceeded its retry budget");
    }
    std::size_t i = uniform_index(rng, n);
    std::size_t j = uniform_index(rng, n);
    if (i == j || is_link(g, i, j)) continue;
    if (i > j) std::swap(i, j);
    out.push_back({i, j});
  }
  return out;
}

TripleSplit split_triples(const std::vector<Triple>& triples,
                          std::uint64_t seed, SplitRatios ratios) {
  if (triples.size() < 10) throw ContractError("split_triples needs at least 10 triples");
  Rng rng(derive_seed(seed, "split-triples"));
  TripleSplit split;
  partition_by_ratio(triples, ratios, rng, split.train, split.validation, split.test);
  return split;
}

}  // namespace pagcn
