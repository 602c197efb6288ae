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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pagcn/matrix.hpp"

namespace pagcn {

struct NodePair {
  std::size_t i = 0;
  std::size_t j = 0;
  auto operator<=>(const NodePair&) const = default;
};

struct WeightedLink {
  std::size_t i = 0;
  std::size_t j = 0;
  double weight = 1.0;
  bool operator==(const WeightedLink&) const = default;
};

// Undirected weighted graph: symmetric non-negative adjacency with a zero
// diagonal, an n x m feature matrix and external node identifiers.
struct Graph {
  Matrix adjacency;
  Matrix features;
  std::vector<std::string> node_ids;

  std::size_t num_nodes() const { return adjacency.rows(); }
  std::size_t num_features() const { return features.cols(); }

  // Throws ContractError when an invariant does not hold.
  void validate() const;

  // Builds a graph from undirected links; duplicate links are summed.
  static Graph from_links(std::size_t n, const std::vector<WeightedLink>& links,
                          Matrix features, std::vector<std::string> node_ids = {});
};

// Links with i < j and positive weight, in row-major order.
std::vector<WeightedLink> upper_links(const Graph& g);

// Same graph restricted to `links` (features and ids kept).
Graph with_links(const Graph& g, const std::vector<WeightedLink>& links);

enum class NormalizationExponent {
  kNegativeHalf,  // D^{-1/2} (A + I) D^{-1/2}
  kPositiveHalf,  // D^{1/2} (A + I) D^{1/2}, kept for ablations
};

struct NormalizedAdjacency {
  Matrix matrix;
};

NormalizedAdjacency normalize_adjacency(
    const Matrix& adjacency,
    NormalizationExponent exponent = NormalizationExponent::kNegativeHalf);
NormalizedAdjacency normalize_adjacency(
    const Graph& g,
    NormalizationExponent exponent = NormalizationExponent::kNegativeHalf);

// One observed cross-graph entry. label 1 marks an aligned pair; label 0 an
// observed non-alignment (the zero entries of the observation mask).
struct AlignedPair {
  std::size_t a = 0;
  std::size_t b = 0;
  int label = 1;
  bool operator==(const AlignedPair&) const = default;
};

struct Alignment {
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  std::vector<AlignedPair> pairs;

  void validate() const;
  std::size_t num_positive() const;
  // n_a x n_b 0/1 matrix of the label-1 pairs.
  Matrix positive_matrix() const;
  // Same alignment seen from B to A.
  Alignment reversed() const;
};

// Appends `ratio * positives` label-0 pairs drawn uniformly from entries that
// are not already in the alignment. Deterministic given `seed`.
void add_alignment_negatives(Alignment& alignment, double ratio,
                             std::uint64_t seed);

struct Triple {
  std::size_t head = 0;
  std::size_t tail = 0;
  std::size_t relation = 0;
  auto operator<=>(const Triple&) const = default;
};

struct RelationalGraph {
  std::size_t num_entities = 0;
  std::size_t num_relations = 0;
  std::vector<Triple> triples;
  Matrix features;
  std::vector<std::string> entity_ids;
  std::vector<std::string> relation_names;

  void validate() const;
};

struct SplitRatios {
  std::size_t train = 8;
  std::size_t validation = 1;
  std::size_t test = 1;
};

struct LinkSplit {
  std::vector<WeightedLink> train;
  std::vector<WeightedLink> validation;
  std::vector<WeightedLink> test;
  std::vector<NodePair> negatives_validation;
  std::vector<NodePair> negatives_test;
};

// Random 8:1:1 partition of the observed links with balanced negatives for
// validation and test. Requires at least 10 links.
LinkSplit split_links(const Graph& g, std::uint64_t seed,
                      SplitRatios ratios = {});

// k_per_positive * num_positives uniform non-link pairs (i < j, i != j).
// Throws SamplingError when the graph has no non-links.
std::vector<NodePair> sample_training_negatives(const Graph& g,
                                                std::size_t num_positives,
                                                std::size_t k_per_positive,
                                                std::uint64_t seed);

struct TripleSplit {
  std::vector<Triple> train;
  std::vector<Triple> validation;
  std::vector<Triple> test;
};

TripleSplit split_triples(const std::vector<Triple>& triples,
                          std::uint64_t seed, SplitRatios ratios = {});

}  // namespace pagcn
