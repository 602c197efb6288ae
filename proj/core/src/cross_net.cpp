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

#include "pagcn/cross_net.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cctype>

#include "pagcn/errors.hpp"
#include "pagcn/metrics.hpp"
#include "pagcn/random.hpp"

namespace pagcn {
namespace {

struct VariantName {
  VariantId id;
  const char* name;
};

constexpr std::array<VariantName, 14> kVariantNames = {{
    {VariantId::kSeparated, "separated"}, {VariantId::kM1, "m1"},
    {VariantId::kM2, "m2"},   {VariantId::kM3, "m3"},   {VariantId::kM4, "m4"},
    {VariantId::kM5, "m5"},   {VariantId::kM6, "m6"},   {VariantId::kM7, "m7"},
    {VariantId::kM8, "m8"},   {VariantId::kM9, "m9"},   {VariantId::kM10, "m10"},
    {VariantId::kM11, "m11"}, {VariantId::kM12, "m12"}, {VariantId::kM13, "m13"},
}};

std::string indexed(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

std::string pair_name(const std::string& base, std::size_t s, std::size_t t) {
  return base + "[" + std::to_string(s) + "," + std::to_string(t) + "]";
}

bool needs_transform(AlignMode mode) {
  return mode == AlignMode::kSoft || mode == AlignMode::kReconstruction;
}

std::size_t add_param(ParamStore& store, const std::string& name, std::size_t rows,
                      std::size_t cols, std::uint64_t seed) {
  return store.add(name, glorot_uniform(rows, cols, derive_seed(seed, name)));
}

void add_into(Matrix& dst, const Matrix& src) {
  if (dst.same_shape(src)) {
    dst += src;
  } else {
    throw ContractError("gradient shape " + src.shape_string() + " does not match " +
                        dst.shape_string());
  }
}

double validation_score(const std::vector<Matrix>& reps, const CrossData& data,
                        const std::vector<std::size_t>& targets) {
  std::vector<double> aucs;
  aucs.reserve(targets.size());
  for (std::size_t i : targets) {
    aucs.push_back(evaluate_links(reps[i], data.graphs[i], SplitPart::kValidation).auc);
  }
  // A zero AUC would make the harmonic mean undefined; it is the worst score.
  for (double a : aucs) {
    if (!(a > 0.0)) return 0.0;
  }
  return harmonic_overall(aucs);
}

}  // namespace

std::string to_string(VariantId id) {
  for (const auto& v : kVariantNames) {
    if (v.id == id) return v.name;
  }
  throw ContractError("unknown variant id");
}

VariantId parse_variant(const std::string& text) {
  std::string lower = text;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (const auto& v : kVariantNames) {
    if (lower == v.name) return v.id;
  }
  throw ConfigError("unknown model '" + text + "' (expected separated or m1..m13)");
}

const std::vector<VariantId>& all_variants() {
  static const std::vector<VariantId> ids = [] {
    std::vector<VariantId> out;
    for (const auto& v : kVariantNames) out.push_back(v.id);
    return out;
  }();
  return ids;
}

std::string to_string(Sharing s) {
  switch (s) {
    case Sharing::kSeparated: return "separated";
    case Sharing::kShareW2: return "share_W2";
    case Sharing::kShareW1W2: return "share_W1_W2";
  }
  return "?";
}

std::string to_string(QMode q) {
  switch (q) {
    case QMode::kNone: return "none";
    case QMode::kAToB: return "q_A_to_B";
    case QMode::kBToA: return "q_B_to_A";
    case QMode::kBoth: return "q_both";
  }
  return "?";
}

std::string to_string(AlignMode a) {
  switch (a) {
    case AlignMode::kNone: return "none";
    case AlignMode::kHard: return "hard";
    case AlignMode::kSoft: return "soft";
    case AlignMode::kReconstruction: return "reconstruction";
  }
  return "?";
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::kJoint: return "joint";
    case Strategy::kPretrainAThenB: return "pretrain_A_then_B";
    case Strategy::kPretrainBThenA: return "pretrain_B_then_A";
  }
  return "?";
}

void ModelConfig::validate(const std::vector<std::size_t>& feature_dims) const {
  const std::size_t k = feature_dims.size();
  if (k == 0) throw ConfigError("at least one graph is required");
  if (alpha.size() != k) {
    throw ConfigError("alpha has " + std::to_string(alpha.size()) + " entries for " +
                      std::to_string(k) + " graphs");
  }
  double alpha_sum = 0.0;
  for (double a : alpha) {
    if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("alpha entries must lie in [0, 1]");
    alpha_sum += a;
  }
  if (std::abs(alpha_sum - 1.0) > 1e-9) throw ConfigError("alpha must sum to 1");
  if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("beta must lie in [0, 1]");
  for (const auto& [pair, g] : gamma) {
    if (!(g >= 0.0 && g <= 1.0)) throw ConfigError("gamma entries must lie in [0, 1]");
    if (pair.first >= pair.second || pair.second >= k) {
      throw ConfigError("gamma key (" + std::to_string(pair.first) + "," +
                        std::to_string(pair.second) + ") is not a graph pair i < j");
    }
  }
  if (dims.size() != k) {
    throw ConfigError("dims has " + std::to_string(dims.size()) + " entries for " +
                      std::to_string(k) + " graphs");
  }
  for (std::size_t d : dims) {
    if (d == 0) throw ConfigError("embedding dimension must be >= 1");
  }
  const bool equal_dims = std::all_of(dims.begin(), dims.end(),
                                      [&](std::size_t d) { return d == dims[0]; });
  if (align_mode == AlignMode::kHard && !equal_dims) {
    throw ConfigError("hard regularization requires d_A == d_B");
  }
  if (sharing != Sharing::kSeparated && !equal_dims) {
    throw ConfigError("parameter sharing requires equal embedding dimensions");
  }
  if (q_mode != QMode::kNone && sharing != Sharing::kShareW1W2) {
    throw ConfigError("feature transforms Q require share_W1_W2");
  }
  if ((q_mode == QMode::kAToB || q_mode == QMode::kBToA) && k != 2) {
    throw ConfigError("q_A_to_B / q_B_to_A are defined for exactly two graphs");
  }
  const std::size_t min_m = *std::min_element(feature_dims.begin(), feature_dims.end());
  if (sharing == Sharing::kShareW1W2 && q_mode == QMode::kNone) {
    for (std::size_t m : feature_dims) {
      if (m != feature_dims[0]) {
        throw ConfigError("share_W1_W2 without Q requires m_A == m_B");
      }
    }
  }
  if (q_mode == QMode::kBoth && m_hat > min_m) {
    throw ConfigError("m_hat = " + std::to_string(m_hat) + " exceeds min_i m_i = " +
                      std::to_string(min_m));
  }
  if (strategy != Strategy::kJoint && k != 2) {
    throw ConfigError("pre-training strategies are defined for exactly two graphs");
  }
  if (negatives_per_positive == 0) {
    throw ConfigError("negatives_per_positive must be >= 1");
  }
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be > 0");
}

ModelConfig config_for_variant(VariantId id, std::size_t d) {
  ModelConfig c;
  c.dims = {d, d};
  switch (id) {
    case VariantId::kSeparated:
      break;
    case VariantId::kM1:
      c.align_mode = AlignMode::kSoft;
      break;
    case VariantId::kM2:
      c.align_mode = AlignMode::kReconstruction;
      break;
    case VariantId::kM3:
      c.sharing = Sharing::kShareW2;
      c.strategy = Strategy::kPretrainAThenB;
      break;
    case VariantId::kM4:
      c.sharing = Sharing::kShareW2;
      c.strategy = Strategy::kPretrainBThenA;
      break;
    case VariantId::kM5:
      c.sharing = Sharing::kShareW2;
      break;
    case VariantId::kM6:
      c.sharing = Sharing::kShareW2;
      c.align_mode = AlignMode::kHard;
      break;
    case VariantId::kM7:
      c.sharing = Sharing::kShareW2;
      c.align_mode = AlignMode::kSoft;
      break;
    case VariantId::kM8:
      c.sharing = Sharing::kShareW2;
      c.align_mode = AlignMode::kReconstruction;
      break;
    case VariantId::kM9:
      c.sharing = Sharing::kShareW1W2;
      c.q_mode = QMode::kAToB;
      break;
    case VariantId::kM10:
      c.sharing = Sharing::kShareW1W2;
      c.q_mode = QMode::kBToA;
      break;
    case VariantId::kM11:
      c.sharing = Sharing::kShareW1W2;
      c.q_mode = QMode::kBoth;
      break;
    case VariantId::kM12:
      c.sharing = Sharing::kShareW1W2;
      c.q_mode = QMode::kBoth;
      c.align_mode = AlignMode::kSoft;
      break;
    case VariantId::kM13:
      c.sharing = Sharing::kShareW1W2;
      c.q_mode = QMode::kBoth;
      c.align_mode = AlignMode::kReconstruction;
      break;
  }
  return c;
}

LinkTask prepare_link_task(const Graph& graph, std::uint64_t split_seed,
                           NormalizationExponent exponent) {
  LinkTask task;
  task.graph = graph;
  task.split = split_links(graph, split_seed);
  const Graph observed = with_links(graph, task.split.train);
  task.input = GcnInput::make(normalize_adjacency(observed, exponent), graph.features);
  return task;
}

GcnWeights CrossParams::view(std::size_t graph) const {
  const GraphSlots& s = graphs.at(graph);
  return {s.q ? &store.at(*s.q) : nullptr, &store.at(s.w1), &store.at(s.w2),
          final_activation};
}

CrossParams build_model(const ModelConfig& config, const CrossData& data,
                        std::uint64_t seed) {
  std::vector<std::size_t> feature_dims;
  for (const LinkTask& t : data.graphs) feature_dims.push_back(t.graph.num_features());
  config.validate(feature_dims);
  const std::size_t k = feature_dims.size();
  const std::size_t d = config.dims[0];

  CrossParams p;
  p.final_activation = config.final_activation;
  p.graphs.resize(k);
  ParamStore& store = p.store;

  switch (config.sharing) {
    case Sharing::kSeparated:
      for (std::size_t i = 0; i < k; ++i) {
        p.graphs[i].w1 = add_param(store, indexed("W1", i), feature_dims[i],
                                   config.dims[i], seed);
        p.graphs[i].w2 = add_param(store, indexed("W2", i), config.dims[i],
                                   config.dims[i], seed);
      }
      break;
    case Sharing::kShareW2: {
      for (std::size_t i = 0; i < k; ++i) {
        p.graphs[i].w1 = add_param(store, indexed("W1", i), feature_dims[i], d, seed);
      }
      const std::size_t w2 = add_param(store, "W2", d, d, seed);
      for (auto& g : p.graphs) g.w2 = w2;
      break;
    }
    case Sharing::kShareW1W2: {
      std::size_t in_dim = feature_dims[0];
      switch (config.q_mode) {
        case QMode::kNone:
          break;
        case QMode::kBoth: {
          const std::size_t m_hat =
              config.m_hat != 0 ? config.m_hat
                                : *std::min_element(feature_dims.begin(), feature_dims.end());
          for (std::size_t i = 0; i < k; ++i) {
            p.graphs[i].q = add_param(store, indexed("Q", i), feature_dims[i], m_hat, seed);
          }
          in_dim = m_hat;
          break;
        }
        case QMode::kAToB:
          p.graphs[0].q = add_param(store, "Q[0]", feature_dims[0], feature_dims[1], seed);
          in_dim = feature_dims[1];
          break;
        case QMode::kBToA:
          p.graphs[1].q = add_param(store, "Q[1]", feature_dims[1], feature_dims[0], seed);
          in_dim = feature_dims[0];
          break;
      }
      const std::size_t w1 = add_param(store, "W1", in_dim, d, seed);
      const std::size_t w2 = add_param(store, "W2", d, d, seed);
      for (auto& g : p.graphs) {
        g.w1 = w1;
        g.w2 = w2;
      }
      break;
    }
  }

  p.transforms.assign(data.alignments.size(), std::nullopt);
  if (needs_transform(config.align_mode)) {
    for (std::size_t t = 0; t < data.alignments.size(); ++t) {
      const AlignmentTerm& term = data.alignments[t];
      p.transforms[t] = add_param(store, pair_name("R", term.source, term.target),
                                  config.dims.at(term.source), config.dims.at(term.target),
                                  seed);
    }
  }
  return p;
}

std::vector<std::vector<NodePair>> sample_epoch_negatives(const ModelConfig& config,
                                                          const CrossData& data,
                                                          std::uint64_t epoch_seed) {
  std::vector<std::vector<NodePair>> out;
  out.reserve(data.graphs.size());
  for (std::size_t i = 0; i < data.graphs.size(); ++i) {
    const LinkTask& t = data.graphs[i];
    out.push_back(sample_training_negatives(t.graph, t.split.train.size(),
                                            config.negatives_per_positive,
                                            derive_seed(epoch_seed, "negatives", i)));
  }
  return out;
}

ObjectiveValue evaluate_objective(const ModelConfig& config, const CrossParams& params,
                                  const CrossData& data,
                                  const std::vector<std::vector<NodePair>>& negatives,
                                  const ObjectiveWeights& weights) {
  const std::size_t k = data.graphs.size();
  if (params.graphs.size() != k || negatives.size() != k || weights.graphs.size() != k ||
      weights.terms.size() != data.alignments.size()) {
    throw ContractError("objective: graph, negative and weight counts disagree");
  }
  ObjectiveValue out;
  out.gradients = params.store.zero_gradients();
  out.graph_losses.resize(k);
  out.term_losses.assign(data.alignments.size(), 0.0);

  std::vector<ForwardCache> caches;
  caches.reserve(k);
  std::vector<Matrix> grad_u;
  grad_u.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    caches.push_back(gcn_forward(data.graphs[i].input, params.view(i)));
    const Matrix& u = caches.back().u;
    LossWithGradient l = recon_loss_with_gradient(u, data.graphs[i].split.train, negatives[i]);
    out.graph_losses[i] = l.loss;
    if (weights.graphs[i] != 0.0) {
      out.total += weights.graphs[i] * l.loss;
      l.grad_u *= weights.graphs[i];
      grad_u.push_back(std::move(l.grad_u));
    } else {
      grad_u.emplace_back(u.rows(), u.cols());
    }
  }

  for (std::size_t t = 0; t < data.alignments.size(); ++t) {
    const AlignmentTerm& term = data.alignments[t];
    const double w = weights.terms[t];
    if (config.align_mode == AlignMode::kNone || w == 0.0) continue;
    const Matrix& ua = caches.at(term.source).u;
    const Matrix& ub = caches.at(term.target).u;
    AlignmentTermValue h;
    switch (config.align_mode) {
      case AlignMode::kHard:
        h = hard_reg_with_gradient(ua, ub, term.alignment, config.reg_rows);
        break;
      case AlignMode::kSoft:
        h = soft_reg_with_gradient(ua, ub, params.store.at(*params.transforms[t]),
                                   term.alignment, config.reg_rows);
        break;
      case AlignMode::kReconstruction:
        h = align_recon_with_gradient(ua, ub, params.store.at(*params.transforms[t]),
                                      term.alignment);
        break;
      case AlignMode::kNone:
        break;
    }
    out.term_losses[t] = h.loss;
    out.total += w * h.loss;
    grad_u[term.source].add_scaled(h.grad_a, w);
    grad_u[term.target].add_scaled(h.grad_b, w);
    if (params.transforms[t]) {
      add_into(out.gradients[*params.transforms[t]], w * h.grad_r);
    }
  }

  for (std::size_t i = 0; i < k; ++i) {
    const bool active = weights.graphs[i] != 0.0 ||
                        std::any_of(data.alignments.begin(), data.alignments.end(),
                                    [&](const AlignmentTerm& a) {
                                      return a.source == i || a.target == i;
                                    });
    if (!active) continue;
    const GraphSlots& slots = params.graphs[i];
    GcnGradients g = gcn_backward(data.graphs[i].input, caches[i], grad_u[i], params.view(i));
    add_into(out.gradients[slots.w1], g.w1);
    add_into(out.gradients[slots.w2], g.w2);
    if (slots.q) add_into(out.gradients[*slots.q], *g.q);
  }

  out.representations.reserve(k);
  for (auto& c : caches) out.representations.push_back(std::move(c.u));
  return out;
}

ObjectiveWeights combined_weights(const ModelConfig& config, const CrossData& data) {
  const double beta = config.align_mode == AlignMode::kNone ? 0.0 : config.beta;
  ObjectiveWeights w;
  for (double a : config.alpha) w.graphs.push_back((1.0 - beta) * a);
  w.terms.assign(data.alignments.size(), beta);
  return w;
}

ObjectiveValue combined_loss(const ModelConfig& config, const CrossParams& params,
                             const CrossData& data, std::uint64_t epoch_seed) {
  return evaluate_objective(config, params, data,
                            sample_epoch_negatives(config, data, epoch_seed),
                            combined_weights(config, data));
}

ObjectiveWeights multi_graph_weights(const ModelConfig& config, const CrossData& data) {
  ObjectiveWeights w;
  w.graphs = config.alpha;
  w.terms.assign(data.alignments.size(), 0.0);
  for (const auto& [pair, g] : config.gamma) {
    bool found = false;
    for (std::size_t t = 0; t < data.alignments.size(); ++t) {
      const AlignmentTerm& term = data.alignments[t];
      if (term.source == pair.first && term.target == pair.second) {
        w.terms[t] = g;
        found = true;
      }
    }
    if (!found) {
      throw ConfigError("gamma names graphs (" + std::to_string(pair.first) + "," +
                        std::to_string(pair.second) + ") but no alignment connects them");
    }
  }
  if (config.align_mode == AlignMode::kNone) std::fill(w.terms.begin(), w.terms.end(), 0.0);
  return w;
}

ObjectiveValue multi_graph_loss(const ModelConfig& config, const CrossParams& params,
                                const CrossData& data, std::uint64_t epoch_seed) {
  if (data.graphs.size() < 2) throw ConfigError("multi-graph loss needs K >= 2");
  return evaluate_objective(config, params, data,
                            sample_epoch_negatives(config, data, epoch_seed),
                            multi_graph_weights(config, data));
}

LinkMetrics evaluate_links(const Matrix& u, const LinkTask& task, SplitPart part) {
  const auto& pos = part == SplitPart::kValidation ? task.split.validation : task.split.test;
  const auto& neg = part == SplitPart::kValidation ? task.split.negatives_validation
                                                   : task.split.negatives_test;
  // Inner products rank identically to sigma(u_i . u_j) without saturating.
  std::vector<double> ps;
  ps.reserve(pos.size());
  for (const WeightedLink& l : pos) ps.push_back(dot(u.row(l.i), u.row(l.j)));
  std::vector<double> ns;
  ns.reserve(neg.size());
  for (const NodePair& p : neg) ns.push_back(dot(u.row(p.i), u.row(p.j)));
  return {auc(ps, ns), average_precision(ps, ns)};
}

std::vector<Matrix> representations(const CrossParams& params, const CrossData& data) {
  std::vector<Matrix> out;
  out.reserve(data.graphs.size());
  for (std::size_t i = 0; i < data.graphs.size(); ++i) {
    out.push_back(gcn_forward(data.graphs[i].input, params.view(i)).u);
  }
  return out;
}

namespace {

struct Phase {
  ObjectiveWeights weights;
  std::vector<std::size_t> targets;  // graphs used for model selection
  bool select = true;
  std::size_t epoch_offset = 0;
};

struct Selection {
  bool have_best = false;
  double best_score = 0.0;
  ParamStore best;
};

// Runs one phase of Adam. The representations returned with each objective
// evaluation belong to the parameters before that epoch's update, so
// selection sees every visited point including the final one.
void run_phase(const ModelConfig& config, const CrossData& data, const Phase& phase,
               std::uint64_t seed, TrainResult& result, Selection& selection) {
  auto consider = [&](const std::vector<Matrix>& reps, std::size_t epoch) {
    if (!phase.select) return;
    const double score = validation_score(reps, data, phase.targets);
    if (!selection.have_best || score > selection.best_score) {
      selection.have_best = true;
      selection.best_score = score;
      selection.best = result.params.store;
      result.best_epoch = epoch;
      result.best_validation = score;
    }
  };

  StoreOptimizer optimizer(result.params.store, AdamConfig{config.learning_rate});
  for (std::size_t e = 0; e < config.epochs; ++e) {
    const std::size_t epoch = phase.epoch_offset + e;
    const std::uint64_t epoch_seed =
        derive_seed(seed, "epoch", config.resample_negatives ? epoch : 0);
    const ObjectiveValue obj =
        evaluate_objective(config, result.params, data,
                           sample_epoch_negatives(config, data, epoch_seed), phase.weights);
    if (!std::isfinite(obj.total)) {
      throw DivergenceError(epoch, "objective is not finite");
    }
    result.loss_trace.push_back(obj.total);
    consider(obj.representations, epoch);
    optimizer.step(result.params.store, obj.gradients);
  }
  if (phase.select) {
    consider(representations(result.params, data), phase.epoch_offset + config.epochs);
  }
}

}  // namespace

TrainResult train_from(const ModelConfig& config, const CrossData& data,
                       CrossParams initial, std::uint64_t seed) {
  std::vector<std::size_t> feature_dims;
  for (const LinkTask& t : data.graphs) feature_dims.push_back(t.graph.num_features());
  config.validate(feature_dims);
  const std::size_t k = data.graphs.size();

  std::vector<Phase> phases;
  if (config.strategy == Strategy::kJoint) {
    Phase p;
    p.weights = k > 2 || config.multi_objective ? multi_graph_weights(config, data)
                                                : combined_weights(config, data);
    for (std::size_t i = 0; i < k; ++i) p.targets.push_back(i);
    phases.push_back(std::move(p));
  } else {
    const std::size_t source = config.strategy == Strategy::kPretrainAThenB ? 0 : 1;
    const std::size_t target = 1 - source;
    ModelConfig warmup = config;
    warmup.alpha = {0.0, 0.0};
    warmup.alpha[source] = 1.0;
    warmup.align_mode = AlignMode::kNone;
    Phase first;
    first.weights = combined_weights(warmup, data);
    first.select = false;
    ModelConfig finetune = config;
    finetune.alpha = {0.0, 0.0};
    finetune.alpha[target] = 1.0;
    Phase second;
    second.weights = combined_weights(finetune, data);
    second.targets = {target};
    second.epoch_offset = config.epochs;
    phases.push_back(std::move(first));
    phases.push_back(std::move(second));
  }

  TrainResult result;
  result.params = std::move(initial);
  Selection selection;
  const auto start = std::chrono::steady_clock::now();
  for (const Phase& phase : phases) run_phase(config, data, phase, seed, result, selection);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const std::size_t total_epochs = config.epochs * phases.size();
  result.seconds_per_epoch = total_epochs > 0 ? seconds / total_epochs : 0.0;
  if (selection.have_best) result.params.store = std::move(selection.best);
  return result;
}

TrainResult train(const ModelConfig& config, const CrossData& data, std::uint64_t seed) {
  return train_from(config, data, build_model(config, data, seed), seed);
}

}  // namespace pagcn
