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

#include "pagcn/relational.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "pagcn/alignment_terms.hpp"
#include "pagcn/errors.hpp"
#include "pagcn/numerics.hpp"
#include "pagcn/random.hpp"

namespace pagcn {
namespace {

constexpr std::size_t kCorruptionRetries = 32;

double clamped_probability(double logit) {
  const double p = sigmoid(logit);
  return std::min(std::max(p, kProbabilityClamp), 1.0 - kProbabilityClamp);
}

std::vector<Matrix> relation_adjacency(std::size_t n, std::size_t num_relations,
                                       const std::vector<Triple>& triples) {
  std::vector<Matrix> a(num_relations, Matrix(n, n));
  for (const Triple& t : triples) {
    if (t.head >= n || t.tail >= n || t.relation >= num_relations) {
      throw ContractError("triple index out of range");
    }
    a[t.relation](t.head, t.tail) = 1.0;
    a[t.relation](t.tail, t.head) = 1.0;
  }
  return a;
}

std::size_t add_param(ParamStore& store, const std::string& name, std::size_t rows,
                      std::size_t cols, std::uint64_t seed) {
  return store.add(name, glorot_uniform(rows, cols, derive_seed(seed, name)));
}

std::string name_of(const std::string& base, std::size_t graph, std::size_t relation) {
  return base + "[" + std::to_string(graph) + "][" + std::to_string(relation) + "]";
}

std::string name_of(const std::string& base, std::size_t index) {
  return base + "[" + std::to_string(index) + "]";
}

void add_into(Matrix& dst, const Matrix& src) {
  if (!dst.same_shape(src)) {
    throw ContractError("gradient shape " + src.shape_string() + " does not match " +
                        dst.shape_string());
  }
  dst += src;
}

}  // namespace

Matrix relation_normalizers(std::size_t num_entities, std::size_t num_relations,
                            const std::vector<Triple>& triples,
                            RelNormalization normalization) {
  const std::vector<Matrix> a = relation_adjacency(num_entities, num_relations, triples);
  Matrix c(num_entities, num_relations);
  for (std::size_t r = 0; r < num_relations; ++r) {
    double total = 0.0;
    std::size_t with_neighbors = 0;
    for (std::size_t i = 0; i < num_entities; ++i) {
      double deg = 0.0;
      for (double v : a[r].row(i)) deg += v;
      c(i, r) = deg;
      if (deg > 0.0) {
        total += deg;
        ++with_neighbors;
      }
    }
    if (normalization == RelNormalization::kGlobal && with_neighbors > 0) {
      const double mean = total / static_cast<double>(with_neighbors);
      for (std::size_t i = 0; i < num_entities; ++i) {
        if (c(i, r) > 0.0) c(i, r) = mean;
      }
    }
  }
  return c;
}

RelInput RelInput::make(std::size_t num_entities, std::size_t num_relations,
                        const std::vector<Triple>& triples, const Matrix& features,
                        RelNormalization normalization) {
  if (features.rows() != num_entities) {
    throw ContractError("relational features have " + std::to_string(features.rows()) +
                        " rows for " + std::to_string(num_entities) + " entities");
  }
  std::vector<Matrix> a = relation_adjacency(num_entities, num_relations, triples);
  const Matrix c = relation_normalizers(num_entities, num_relations, triples, normalization);
  RelInput in;
  in.features = features;
  for (std::size_t r = 0; r < num_relations; ++r) {
    Matrix& n = a[r];
    for (std::size_t i = 0; i < num_entities; ++i) {
      if (c(i, r) == 0.0) continue;
      const double inv = 1.0 / c(i, r);
      for (double& v : n.row(i)) v *= inv;
    }
    in.propagated_features.push_back(matmul(n, features));
    in.propagation.push_back(std::move(n));
  }
  return in;
}

RelForwardCache rgcn_forward(const RelInput& input, const RelGcnWeights& w) {
  const std::size_t nr = input.propagation.size();
  if (w.w1.size() != nr || w.w2.size() != nr) {
    throw ContractError("rgcn: " + std::to_string(nr) + " relations but " +
                        std::to_string(w.w1.size()) + "/" + std::to_string(w.w2.size()) +
                        " weight matrices");
  }
  if (w.w2.empty() && w.self2 == nullptr) {
    throw ContractError("rgcn: no relations and no self-loop weights");
  }
  const std::size_t in_dim = w.q ? w.q->cols() : input.features.cols();
  if (w.q && w.q->rows() != input.features.cols()) {
    throw ContractError("rgcn: Q is " + w.q->shape_string() + " but features have " +
                        std::to_string(input.features.cols()) + " columns");
  }
  const Matrix* first_w1 = !w.w1.empty() ? w.w1[0] : w.self1;
  const Matrix* first_w2 = !w.w2.empty() ? w.w2[0] : w.self2;
  if (first_w1 == nullptr || first_w2 == nullptr) {
    throw ContractError("rgcn: first layer has no weights");
  }
  const std::size_t d = first_w2->cols();
  auto check = [&](const Matrix* m, std::size_t rows, std::size_t cols, const char* what) {
    if (m != nullptr && (m->rows() != rows || m->cols() != cols)) {
      throw ContractError(std::string("rgcn: ") + what + " is " + m->shape_string() +
                          ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
    }
  };
  const std::size_t hidden = first_w1->cols();
  for (const Matrix* m : w.w1) check(m, in_dim, hidden, "W1_r");
  for (const Matrix* m : w.w2) check(m, hidden, d, "W2_r");
  check(w.self1, in_dim, hidden, "S1");
  check(w.self2, hidden, d, "S2");

  RelForwardCache c;
  const std::size_t n = input.features.rows();
  c.layer1_input = w.q ? matmul(input.features, *w.q) : input.features;
  c.h1_pre = Matrix(n, hidden);
  for (std::size_t r = 0; r < nr; ++r) {
    c.messages1.push_back(w.q ? matmul(input.propagated_features[r], *w.q)
                              : input.propagated_features[r]);
    c.h1_pre += matmul(c.messages1[r], *w.w1[r]);
  }
  if (w.self1 != nullptr) c.h1_pre += matmul(c.layer1_input, *w.self1);
  c.h1 = relu(c.h1_pre);
  c.h2_pre = Matrix(n, d);
  for (std::size_t r = 0; r < nr; ++r) {
    c.messages2.push_back(matmul(input.propagation[r], c.h1));
    c.h2_pre += matmul(c.messages2[r], *w.w2[r]);
  }
  if (w.self2 != nullptr) c.h2_pre += matmul(c.h1, *w.self2);
  c.u = w.final_activation == FinalActivation::kRowSoftmax ? row_softmax(c.h2_pre) : c.h2_pre;
  return c;
}

RelGcnGradients rgcn_backward(const RelInput& input, const RelForwardCache& cache,
                              const Matrix& grad_u, const RelGcnWeights& w) {
  if (!grad_u.same_shape(cache.u)) {
    throw ContractError("rgcn_backward: dL/dU is " + grad_u.shape_string() +
                        " but U is " + cache.u.shape_string());
  }
  const std::size_t nr = input.propagation.size();
  RelGcnGradients g;
  const Matrix dh2 = final_activation_backward(cache.u, grad_u, w.final_activation);

  Matrix dh1(cache.h1.rows(), cache.h1.cols());
  for (std::size_t r = 0; r < nr; ++r) {
    g.w2.push_back(matmul_tn(cache.messages2[r], dh2));
    dh1 += matmul_tn(input.propagation[r], matmul_nt(dh2, *w.w2[r]));
  }
  if (w.self2 != nullptr) {
    g.self2 = matmul_tn(cache.h1, dh2);
    dh1 += matmul_nt(dh2, *w.self2);
  }
  for (std::size_t i = 0; i < dh1.size(); ++i) {
    if (!(cache.h1_pre.values()[i] > 0.0)) dh1.values()[i] = 0.0;
  }

  for (std::size_t r = 0; r < nr; ++r) g.w1.push_back(matmul_tn(cache.messages1[r], dh1));
  if (w.self1 != nullptr) g.self1 = matmul_tn(cache.layer1_input, dh1);
  if (w.q != nullptr) {
    Matrix dq(w.q->rows(), w.q->cols());
    for (std::size_t r = 0; r < nr; ++r) {
      dq += matmul_tn(input.propagated_features[r], matmul_nt(dh1, *w.w1[r]));
    }
    if (w.self1 != nullptr) dq += matmul_tn(input.features, matmul_nt(dh1, *w.self1));
    g.q = std::move(dq);
  }
  return g;
}

double distmult_logit(const Matrix& u, const Matrix& d, const Triple& t) {
  if (t.relation >= d.rows() || d.cols() != u.cols()) {
    throw ContractError("distmult: core tensor is " + d.shape_string() + " for relation " +
                        std::to_string(t.relation) + " and d = " + std::to_string(u.cols()));
  }
  auto h = u.row(t.head);
  auto tl = u.row(t.tail);
  auto dr = d.row(t.relation);
  double s = 0.0;
  // The head-tail product comes first so swapping them is exact.
  for (std::size_t k = 0; k < h.size(); ++k) s += (h[k] * tl[k]) * dr[k];
  return s;
}

std::vector<double> distmult_score(const Matrix& u, const Matrix& d,
                                   const std::vector<Triple>& triples) {
  std::vector<double> out;
  out.reserve(triples.size());
  for (const Triple& t : triples) out.push_back(sigmoid(distmult_logit(u, d, t)));
  return out;
}

double relational_loss(const Matrix& u, const Matrix& d, const std::vector<Triple>& positives,
                       const std::vector<Triple>& negatives) {
  double loss = 0.0;
  for (const Triple& t : positives) loss -= std::log(clamped_probability(distmult_logit(u, d, t)));
  for (const Triple& t : negatives) {
    loss -= std::log(1.0 - clamped_probability(distmult_logit(u, d, t)));
  }
  return loss;
}

RelationalLossValue relational_loss_with_gradient(const Matrix& u, const Matrix& d,
                                                  const std::vector<Triple>& positives,
                                                  const std::vector<Triple>& negatives) {
  RelationalLossValue out{0.0, Matrix(u.rows(), u.cols()), Matrix(d.rows(), d.cols())};
  auto accumulate = [&](const Triple& t, double coeff) {
    auto h = u.row(t.head);
    auto tl = u.row(t.tail);
    auto dr = d.row(t.relation);
    auto gh = out.grad_u.row(t.head);
    for (std::size_t k = 0; k < h.size(); ++k) gh[k] += coeff * dr[k] * tl[k];
    auto gt = out.grad_u.row(t.tail);
    for (std::size_t k = 0; k < h.size(); ++k) gt[k] += coeff * dr[k] * h[k];
    auto gd = out.grad_d.row(t.relation);
    for (std::size_t k = 0; k < h.size(); ++k) gd[k] += coeff * h[k] * tl[k];
  };
  for (const Triple& t : positives) {
    const double s = distmult_logit(u, d, t);
    out.loss -= std::log(clamped_probability(s));
    accumulate(t, -(1.0 - sigmoid(s)));
  }
  for (const Triple& t : negatives) {
    const double s = distmult_logit(u, d, t);
    out.loss -= std::log(1.0 - clamped_probability(s));
    accumulate(t, sigmoid(s));
  }
  return out;
}

std::vector<Triple> sample_corrupted_triples(std::size_t num_entities,
                                             const std::vector<Triple>& positives,
                                             const std::set<Triple>& known,
                                             std::uint64_t seed) {
  if (num_entities < 2) throw SamplingError("corruption needs at least two entities");
  Rng rng(seed);
  std::vector<Triple> out;
  out.reserve(positives.size());
  for (const Triple& t : positives) {
    Triple c = t;
    for (std::size_t attempt = 0; attempt < kCorruptionRetries; ++attempt) {
      c = t;
      const bool corrupt_head = uniform_index(rng, 2) == 0;
      const std::size_t e = uniform_index(rng, num_entities);
      (corrupt_head ? c.head : c.tail) = e;
      if (!known.contains(c)) break;
    }
    out.push_back(c);
  }
  return out;
}

RelationalTask prepare_relational_task(const RelationalGraph& graph,
                                       std::uint64_t split_seed,
                                       const RelOptions& options) {
  graph.validate();
  RelationalTask task;
  task.graph = graph;
  task.split = split_triples(graph.triples, split_seed);
  task.input = RelInput::make(graph.num_entities, graph.num_relations, task.split.train,
                              graph.features, options.normalization);
  task.known = std::set<Triple>(graph.triples.begin(), graph.triples.end());
  return task;
}

RelGcnWeights RelCrossParams::view(std::size_t graph) const {
  const RelGraphSlots& s = graphs.at(graph);
  RelGcnWeights w;
  w.q = s.q ? &store.at(*s.q) : nullptr;
  for (std::size_t slot : s.w1) w.w1.push_back(&store.at(slot));
  for (std::size_t slot : s.w2) w.w2.push_back(&store.at(slot));
  w.self1 = s.self1 ? &store.at(*s.self1) : nullptr;
  w.self2 = s.self2 ? &store.at(*s.self2) : nullptr;
  w.final_activation = final_activation;
  return w;
}

bool supports_relational(VariantId id) {
  switch (id) {
    case VariantId::kSeparated:
    case VariantId::kM1:
    case VariantId::kM2:
    case VariantId::kM5:
    case VariantId::kM11:
    case VariantId::kM12:
    case VariantId::kM13:
      return true;
    default:
      return false;
  }
}

RelCrossParams build_relational_model(const ModelConfig& config, const RelCrossData& data,
                                      std::uint64_t seed) {
  std::vector<std::size_t> feature_dims;
  std::vector<std::size_t> relations;
  for (const RelationalTask& t : data.graphs) {
    feature_dims.push_back(t.graph.features.cols());
    relations.push_back(t.graph.num_relations);
  }
  config.validate(feature_dims);
  if (config.strategy != Strategy::kJoint) {
    throw ConfigError("the relation task supports joint training only");
  }
  if (config.q_mode == QMode::kAToB || config.q_mode == QMode::kBToA) {
    throw ConfigError("the relation task supports q_mode none or q_both");
  }
  const std::size_t k = data.graphs.size();
  const std::size_t shared_relations = *std::min_element(relations.begin(), relations.end());
  const bool equal_schema = std::all_of(relations.begin(), relations.end(),
                                        [&](std::size_t r) { return r == relations[0]; });
  if (config.sharing != Sharing::kSeparated && data.options.require_equal_schema &&
      !equal_schema) {
    throw ConfigError("parameter sharing with require_equal_schema needs equal relation counts");
  }
  const bool self = data.options.self_loops;

  RelCrossParams p;
  p.final_activation = config.final_activation;
  p.graphs.resize(k);
  ParamStore& store = p.store;

  // Feature transforms and the input width of the first layer.
  std::vector<std::size_t> in_dims = feature_dims;
  if (config.sharing == Sharing::kShareW1W2 && config.q_mode == QMode::kBoth) {
    const std::size_t m_hat = config.m_hat != 0
                                  ? config.m_hat
                                  : *std::min_element(feature_dims.begin(), feature_dims.end());
    for (std::size_t i = 0; i < k; ++i) {
      p.graphs[i].q = add_param(store, name_of("Q", i), feature_dims[i], m_hat, seed);
      in_dims[i] = m_hat;
    }
  }

  // Layer `layer` is shared when the sharing mode covers it.
  auto build_layer = [&](int layer, bool shared) {
    const std::string base = layer == 1 ? "W1" : "W2";
    const std::string self_base = layer == 1 ? "S1" : "S2";
    std::vector<std::size_t> shared_slots;
    std::optional<std::size_t> shared_self;
    if (shared) {
      for (std::size_t r = 0; r < shared_relations; ++r) {
        const std::size_t rows = layer == 1 ? in_dims[0] : config.dims[0];
        shared_slots.push_back(add_param(store, name_of(base, r), rows, config.dims[0], seed));
      }
      if (self) {
        const std::size_t rows = layer == 1 ? in_dims[0] : config.dims[0];
        shared_self = add_param(store, self_base, rows, config.dims[0], seed);
      }
    }
    for (std::size_t i = 0; i < k; ++i) {
      RelGraphSlots& s = p.graphs[i];
      auto& slots = layer == 1 ? s.w1 : s.w2;
      const std::size_t rows = layer == 1 ? in_dims[i] : config.dims[i];
      for (std::size_t r = 0; r < relations[i]; ++r) {
        if (shared && r < shared_relations) {
          slots.push_back(shared_slots[r]);
        } else {
          slots.push_back(add_param(store, name_of(base, i, r), rows, config.dims[i], seed));
        }
      }
      if (self) {
        auto& self_slot = layer == 1 ? s.self1 : s.self2;
        self_slot = shared ? *shared_self
                           : add_param(store, name_of(self_base, i), rows, config.dims[i], seed);
      }
    }
  };
  build_layer(1, config.sharing == Sharing::kShareW1W2);
  build_layer(2, config.sharing != Sharing::kSeparated);

  for (std::size_t i = 0; i < k; ++i) {
    p.graphs[i].core = add_param(store, name_of("D", i), relations[i], config.dims[i], seed);
  }

  p.transforms.assign(data.alignments.size(), std::nullopt);
  if (config.align_mode == AlignMode::kSoft ||
      config.align_mode == AlignMode::kReconstruction) {
    for (std::size_t t = 0; t < data.alignments.size(); ++t) {
      const AlignmentTerm& term = data.alignments[t];
      p.transforms[t] = add_param(
          store, "R[" + std::to_string(term.source) + "," + std::to_string(term.target) + "]",
          config.dims.at(term.source), config.dims.at(term.target), seed);
    }
  }
  return p;
}

std::vector<std::vector<Triple>> sample_relational_negatives(const RelCrossData& data,
                                                             std::uint64_t epoch_seed) {
  std::vector<std::vector<Triple>> out;
  for (std::size_t i = 0; i < data.graphs.size(); ++i) {
    const RelationalTask& t = data.graphs[i];
    out.push_back(sample_corrupted_triples(t.graph.num_entities, t.split.train, t.known,
                                           derive_seed(epoch_seed, "corrupt", i)));
  }
  return out;
}

ObjectiveValue evaluate_relational_objective(
    const ModelConfig& config, const RelCrossParams& params, const RelCrossData& data,
    const std::vector<std::vector<Triple>>& negatives, const ObjectiveWeights& weights) {
  const std::size_t k = data.graphs.size();
  if (params.graphs.size() != k || negatives.size() != k || weights.graphs.size() != k ||
      weights.terms.size() != data.alignments.size()) {
    throw ContractError("relational objective: graph, negative and weight counts disagree");
  }
  ObjectiveValue out;
  out.gradients = params.store.zero_gradients();
  out.graph_losses.resize(k);
  out.term_losses.assign(data.alignments.size(), 0.0);

  std::vector<RelForwardCache> caches;
  std::vector<Matrix> grad_u;
  for (std::size_t i = 0; i < k; ++i) {
    caches.push_back(rgcn_forward(data.graphs[i].input, params.view(i)));
    const Matrix& u = caches.back().u;
    RelationalLossValue l = relational_loss_with_gradient(
        u, params.core(i), data.graphs[i].split.train, negatives[i]);
    out.graph_losses[i] = l.loss;
    if (weights.graphs[i] != 0.0) {
      out.total += weights.graphs[i] * l.loss;
      l.grad_u *= weights.graphs[i];
      l.grad_d *= weights.graphs[i];
      add_into(out.gradients[params.graphs[i].core], l.grad_d);
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
    if (params.transforms[t]) add_into(out.gradients[*params.transforms[t]], w * h.grad_r);
  }

  for (std::size_t i = 0; i < k; ++i) {
    const RelGraphSlots& s = params.graphs[i];
    const RelGcnGradients g =
        rgcn_backward(data.graphs[i].input, caches[i], grad_u[i], params.view(i));
    for (std::size_t r = 0; r < s.w1.size(); ++r) add_into(out.gradients[s.w1[r]], g.w1[r]);
    for (std::size_t r = 0; r < s.w2.size(); ++r) add_into(out.gradients[s.w2[r]], g.w2[r]);
    if (s.self1) add_into(out.gradients[*s.self1], *g.self1);
    if (s.self2) add_into(out.gradients[*s.self2], *g.self2);
    if (s.q) add_into(out.gradients[*s.q], *g.q);
  }
  for (auto& c : caches) out.representations.push_back(std::move(c.u));
  return out;
}

ObjectiveWeights relational_weights(const ModelConfig& config, const RelCrossData& data) {
  ObjectiveWeights w;
  if (data.graphs.size() > 2 || config.multi_objective) {
    w.graphs = config.alpha;
    w.terms.assign(data.alignments.size(), 0.0);
    for (const auto& [pair, g] : config.gamma) {
      bool found = false;
      for (std::size_t t = 0; t < data.alignments.size(); ++t) {
        if (data.alignments[t].source == pair.first && data.alignments[t].target == pair.second) {
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
  const double beta = config.align_mode == AlignMode::kNone ? 0.0 : config.beta;
  for (double a : config.alpha) w.graphs.push_back((1.0 - beta) * a);
  w.terms.assign(data.alignments.size(), beta);
  return w;
}

ObjectiveValue relational_combined_loss(const ModelConfig& config,
                                        const RelCrossParams& params,
                                        const RelCrossData& data, std::uint64_t epoch_seed) {
  return evaluate_relational_objective(config, params, data,
                                       sample_relational_negatives(data, epoch_seed),
                                       relational_weights(config, data));
}

RankingMetrics evaluate_relations(const Matrix& u, const Matrix& d, const RelationalTask& task,
                                  SplitPart part, const std::vector<std::size_t>& k_values) {
  const std::size_t n = task.graph.num_entities;
  auto tails = [&](std::size_t head, std::size_t relation) {
    std::vector<double> s(n);
    for (std::size_t e = 0; e < n; ++e) s[e] = distmult_logit(u, d, {head, e, relation});
    return s;
  };
  auto heads = [&](std::size_t tail, std::size_t relation) {
    std::vector<double> s(n);
    for (std::size_t e = 0; e < n; ++e) s[e] = distmult_logit(u, d, {e, tail, relation});
    return s;
  };
  const auto& test = part == SplitPart::kValidation ? task.split.validation : task.split.test;
  const std::vector<Triple> known(task.known.begin(), task.known.end());
  return mrr_hits_batched(tails, heads, n, test, known, k_values);
}

std::vector<Matrix> relational_representations(const RelCrossParams& params,
                                               const RelCrossData& data) {
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < data.graphs.size(); ++i) {
    out.push_back(rgcn_forward(data.graphs[i].input, params.view(i)).u);
  }
  return out;
}

RelTrainResult train_relational(const ModelConfig& config, const RelCrossData& data,
                                std::uint64_t seed) {
  RelTrainResult result;
  result.params = build_relational_model(config, data, seed);
  const ObjectiveWeights weights = relational_weights(config, data);

  bool have_best = false;
  ParamStore best;
  auto consider = [&](const std::vector<Matrix>& reps, std::size_t epoch) {
    std::vector<double> mrr;
    for (std::size_t i = 0; i < data.graphs.size(); ++i) {
      mrr.push_back(evaluate_relations(reps[i], result.params.core(i), data.graphs[i],
                                       SplitPart::kValidation)
                        .mrr_filtered);
    }
    const double score = harmonic_overall(mrr);
    if (!have_best || score > result.best_validation) {
      have_best = true;
      best = result.params.store;
      result.best_validation = score;
      result.best_epoch = epoch;
    }
  };

  StoreOptimizer optimizer(result.params.store, AdamConfig{config.learning_rate});
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const std::uint64_t epoch_seed =
        derive_seed(seed, "epoch", config.resample_negatives ? epoch : 0);
    const ObjectiveValue obj = evaluate_relational_objective(
        config, result.params, data, sample_relational_negatives(data, epoch_seed), weights);
    if (!std::isfinite(obj.total)) throw DivergenceError(epoch, "objective is not finite");
    result.loss_trace.push_back(obj.total);
    consider(obj.representations, epoch);
    optimizer.step(result.params.store, obj.gradients);
  }
  consider(relational_representations(result.params, data), config.epochs);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.seconds_per_epoch = config.epochs > 0 ? seconds / config.epochs : 0.0;
  result.params.store = std::move(best);
  return result;
}

}  // namespace pagcn
