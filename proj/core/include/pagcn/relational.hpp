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
#include <optional>
#include <set>
#include <vector>

#include "pagcn/cross_net.hpp"
#include "pagcn/gcn.hpp"
#include "pagcn/graph.hpp"
#include "pagcn/matrix.hpp"
#include "pagcn/metrics.hpp"
#include "pagcn/param_store.hpp"

namespace pagcn {

enum class RelNormalization {
  kPerNode,  // c_{i,r} = number of r-neighbors of node i
  kGlobal,   // c_r = mean r-degree over nodes with at least one r-neighbor
};

struct RelOptions {
  bool self_loops = true;  // dedicated self-connection matrix per layer
  RelNormalization normalization = RelNormalization::kPerNode;
  // When set, sharing across graphs with different relation counts is a
  // configuration error instead of sharing the first min(n_R) relations.
  bool require_equal_schema = false;
};

// c as an n x n_R matrix. Entries of nodes without r-neighbors are 0.
// Relations are treated as undirected: (h, r, t) connects h and t both ways.
Matrix relation_normalizers(std::size_t num_entities, std::size_t num_relations,
                            const std::vector<Triple>& triples,
                            RelNormalization normalization = RelNormalization::kPerNode);

// Graph-side constants: the propagation matrices N_r = diag(1/c_r) A_r and
// the products N_r X.
struct RelInput {
  std::vector<Matrix> propagation;
  std::vector<Matrix> propagated_features;
  Matrix features;

  static RelInput make(std::size_t num_entities, std::size_t num_relations,
                       const std::vector<Triple>& triples, const Matrix& features,
                       RelNormalization normalization = RelNormalization::kPerNode);
};

// Non-owning view of one graph's relational encoder weights.
struct RelGcnWeights {
  const Matrix* q = nullptr;
  std::vector<const Matrix*> w1;  // one per relation, in_dim x d
  std::vector<const Matrix*> w2;  // one per relation, d x d
  const Matrix* self1 = nullptr;  // in_dim x d, absent in strict mode
  const Matrix* self2 = nullptr;  // d x d
  FinalActivation final_activation = FinalActivation::kRowSoftmax;
};

struct RelForwardCache {
  Matrix layer1_input;             // X or X Q
  std::vector<Matrix> messages1;   // N_r X Q
  Matrix h1_pre;
  Matrix h1;
  std::vector<Matrix> messages2;   // N_r H1
  Matrix h2_pre;
  Matrix u;
};

// H1 = ReLU(sum_r N_r X W1_r + X S1), U = act(sum_r N_r H1 W2_r + H1 S2).
RelForwardCache rgcn_forward(const RelInput& input, const RelGcnWeights& weights);

struct RelGcnGradients {
  std::vector<Matrix> w1;
  std::vector<Matrix> w2;
  std::optional<Matrix> self1;
  std::optional<Matrix> self2;
  std::optional<Matrix> q;
};

RelGcnGradients rgcn_backward(const RelInput& input, const RelForwardCache& cache,
                              const Matrix& grad_u, const RelGcnWeights& weights);

// u_h^T diag(D_r) u_t; D is n_R x d with one diagonal per row.
double distmult_logit(const Matrix& u, const Matrix& d, const Triple& t);
// sigma of the logit for each triple.
std::vector<double> distmult_score(const Matrix& u, const Matrix& d,
                                   const std::vector<Triple>& triples);

struct RelationalLossValue {
  double loss = 0.0;
  Matrix grad_u;
  Matrix grad_d;
};

// -sum_pos log sigma(s) - sum_neg log(1 - sigma(s)), clamped like recon_loss.
double relational_loss(const Matrix& u, const Matrix& d, const std::vector<Triple>& positives,
                       const std::vector<Triple>& negatives);
RelationalLossValue relational_loss_with_gradient(const Matrix& u, const Matrix& d,
                                                  const std::vector<Triple>& positives,
                                                  const std::vector<Triple>& negatives);

// One corruption per positive: head or tail replaced by a uniform entity,
// rejecting corruptions found in `known` while the retry budget lasts.
std::vector<Triple> sample_corrupted_triples(std::size_t num_entities,
                                             const std::vector<Triple>& positives,
                                             const std::set<Triple>& known,
                                             std::uint64_t seed);

struct RelationalTask {
  RelationalGraph graph;
  TripleSplit split;
  RelInput input;              // built from training triples only
  std::set<Triple> known;      // every observed triple, for filtering
};

RelationalTask prepare_relational_task(const RelationalGraph& graph,
                                       std::uint64_t split_seed,
                                       const RelOptions& options = {});

struct RelCrossData {
  std::vector<RelationalTask> graphs;
  std::vector<AlignmentTerm> alignments;
  RelOptions options;
};

struct RelGraphSlots {
  std::optional<std::size_t> q;
  std::vector<std::size_t> w1;
  std::vector<std::size_t> w2;
  std::optional<std::size_t> self1;
  std::optional<std::size_t> self2;
  std::size_t core = 0;  // D, n_R x d
};

struct RelCrossParams {
  ParamStore store;
  std::vector<RelGraphSlots> graphs;
  std::vector<std::optional<std::size_t>> transforms;
  FinalActivation final_activation = FinalActivation::kRowSoftmax;

  RelGcnWeights view(std::size_t graph) const;
  const Matrix& core(std::size_t graph) const { return store.at(graphs.at(graph).core); }
};

// Variants evaluated on the relation task.
bool supports_relational(VariantId id);

// Sharing follows the link-task registry. Per-relation matrices are shared
// for the first min(n_R) relation indices; the rest and D stay per graph.
RelCrossParams build_relational_model(const ModelConfig& config, const RelCrossData& data,
                                      std::uint64_t seed);

std::vector<std::vector<Triple>> sample_relational_negatives(const RelCrossData& data,
                                                             std::uint64_t epoch_seed);

ObjectiveValue evaluate_relational_objective(
    const ModelConfig& config, const RelCrossParams& params, const RelCrossData& data,
    const std::vector<std::vector<Triple>>& negatives, const ObjectiveWeights& weights);

ObjectiveWeights relational_weights(const ModelConfig& config, const RelCrossData& data);

ObjectiveValue relational_combined_loss(const ModelConfig& config,
                                        const RelCrossParams& params,
                                        const RelCrossData& data, std::uint64_t epoch_seed);

// Raw and filtered MRR / Hits@k with logits as scores.
RankingMetrics evaluate_relations(const Matrix& u, const Matrix& d, const RelationalTask& task,
                                  SplitPart part, const std::vector<std::size_t>& k_values = {1, 3});

std::vector<Matrix> relational_representations(const RelCrossParams& params,
                                               const RelCrossData& data);

struct RelTrainResult {
  RelCrossParams params;
  std::vector<double> loss_trace;
  std::size_t best_epoch = 0;
  double best_validation = 0.0;  // harmonic mean of validation filtered MRR
  double seconds_per_epoch = 0.0;
};

RelTrainResult train_relational(const ModelConfig& config, const RelCrossData& data,
                                std::uint64_t seed);

}  // namespace pagcn
