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
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pagcn/alignment_terms.hpp"
#include "pagcn/gcn.hpp"
#include "pagcn/graph.hpp"
#include "pagcn/numerics.hpp"
#include "pagcn/param_store.hpp"

namespace pagcn {

enum class Sharing { kSeparated, kShareW2, kShareW1W2 };
// Feature transforms used when W1 is shared across graphs with different
// raw feature spaces. kAToB / kBToA exist for exactly two graphs.
enum class QMode { kNone, kAToB, kBToA, kBoth };
enum class AlignMode { kNone, kHard, kSoft, kReconstruction };
enum class Strategy { kJoint, kPretrainAThenB, kPretrainBThenA };

enum class VariantId {
  kSeparated, kM1, kM2, kM3, kM4, kM5, kM6, kM7, kM8, kM9, kM10, kM11, kM12, kM13
};

std::string to_string(VariantId id);
VariantId parse_variant(const std::string& text);  // "separated", "m1".."m13"
const std::vector<VariantId>& all_variants();

std::string to_string(Sharing s);
std::string to_string(QMode q);
std::string to_string(AlignMode a);
std::string to_string(Strategy s);

using GraphPair = std::pair<std::size_t, std::size_t>;

struct ModelConfig {
  Sharing sharing = Sharing::kSeparated;
  QMode q_mode = QMode::kNone;
  AlignMode align_mode = AlignMode::kNone;
  Strategy strategy = Strategy::kJoint;

  std::vector<double> alpha = {0.5, 0.5};  // per-graph weights, sum to 1
  double beta = 0.5;                       // alignment weight, two graphs
  std::map<GraphPair, double> gamma;       // per-pair weights, K graphs
  bool multi_objective = false;  // gamma-weighted objective even for K = 2
  std::vector<std::size_t> dims = {64, 64};
  std::size_t m_hat = 0;  // 0 selects min_i m_i
  FinalActivation final_activation = FinalActivation::kRowSoftmax;
  RowScope reg_rows = RowScope::kAlignedRows;

  std::size_t epochs = 200;
  double learning_rate = 0.01;
  std::size_t negatives_per_positive = 1;
  bool resample_negatives = true;

  // Throws ConfigError naming the violated constraint.
  void validate(const std::vector<std::size_t>& feature_dims) const;
};

// The fixed M1-M13 registry; d applies to every graph.
ModelConfig config_for_variant(VariantId id, std::size_t d = 64);

// Alignment between graphs `source` and `target` (source < target).
struct AlignmentTerm {
  std::size_t source = 0;
  std::size_t target = 1;
  Alignment alignment;
};

// Training view of one graph: the full graph (for negative sampling), its
// link split and the forward-pass constants built from training links only.
struct LinkTask {
  Graph graph;
  LinkSplit split;
  GcnInput input;
};

LinkTask prepare_link_task(const Graph& graph, std::uint64_t split_seed,
                           NormalizationExponent exponent =
                               NormalizationExponent::kNegativeHalf);

struct CrossData {
  std::vector<LinkTask> graphs;
  std::vector<AlignmentTerm> alignments;
};

// Slot indices into the parameter store. Shared parameters have equal slots.
struct GraphSlots {
  std::optional<std::size_t> q;
  std::size_t w1 = 0;
  std::size_t w2 = 0;
};

struct CrossParams {
  ParamStore store;
  std::vector<GraphSlots> graphs;
  // One R per alignment term when the alignment mode needs it.
  std::vector<std::optional<std::size_t>> transforms;
  FinalActivation final_activation = FinalActivation::kRowSoftmax;

  GcnWeights view(std::size_t graph) const;
};

CrossParams build_model(const ModelConfig& config, const CrossData& data,
                        std::uint64_t seed);

struct ObjectiveValue {
  double total = 0.0;
  std::vector<double> graph_losses;  // unweighted L_i
  std::vector<double> term_losses;   // unweighted h_p
  std::vector<Matrix> gradients;     // one per store slot
  std::vector<Matrix> representations;  // U_i
};

// Per-graph and per-alignment-term coefficients of the objective.
struct ObjectiveWeights {
  std::vector<double> graphs;
  std::vector<double> terms;
};

// Training negatives for every graph at a given epoch seed.
std::vector<std::vector<NodePair>> sample_epoch_negatives(const ModelConfig& config,
                                                          const CrossData& data,
                                                          std::uint64_t epoch_seed);

// sum_i w_i L_i + sum_p w_p h_p with analytic gradients into every slot.
// Terms with weight 0 are skipped, so their parameters receive zero gradient.
ObjectiveValue evaluate_objective(const ModelConfig& config, const CrossParams& params,
                                  const CrossData& data,
                                  const std::vector<std::vector<NodePair>>& negatives,
                                  const ObjectiveWeights& weights);

// Two-graph objective (1 - beta) sum_i alpha_i L_i + beta h. beta is forced
// to 0 when align_mode is none.
ObjectiveWeights combined_weights(const ModelConfig& config, const CrossData& data);
ObjectiveValue combined_loss(const ModelConfig& config, const CrossParams& params,
                             const CrossData& data, std::uint64_t epoch_seed);

// K-graph objective sum_i alpha_i L_i + sum_{i<j} gamma_ij h_ij. Every
// gamma entry must name an alignment term present in `data`.
ObjectiveWeights multi_graph_weights(const ModelConfig& config, const CrossData& data);
ObjectiveValue multi_graph_loss(const ModelConfig& config, const CrossParams& params,
                                const CrossData& data, std::uint64_t epoch_seed);

struct LinkMetrics {
  double auc = 0.0;
  double ap = 0.0;
};

enum class SplitPart { kValidation, kTest };

LinkMetrics evaluate_links(const Matrix& u, const LinkTask& task, SplitPart part);

struct TrainResult {
  CrossParams params;  // best-validation snapshot
  std::vector<double> loss_trace;  // objective value per epoch
  std::size_t best_epoch = 0;
  double best_validation = 0.0;
  double seconds_per_epoch = 0.0;
};

// Joint: Adam on the combined (K = 2) or multi-graph (K > 2 or
// multi_objective) objective.
// Pretrain: a source-only phase then a target phase, each `epochs` long,
// with shared parameters carried over. Model selection uses the harmonic
// mean of validation AUC over the graphs being targeted.
TrainResult train(const ModelConfig& config, const CrossData& data, std::uint64_t seed);

// Same as train() but starting from given parameters; epochs may be 0.
TrainResult train_from(const ModelConfig& config, const CrossData& data,
                       CrossParams initial, std::uint64_t seed);

std::vector<Matrix> representations(const CrossParams& params, const CrossData& data);

}  // namespace pagcn
