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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "pagcn/errors.hpp"
#include "pagcn/gcn.hpp"
#include "pagcn/random.hpp"
#include "pagcn/relational.hpp"
#include "pagcn/synthetic.hpp"

namespace pagcn {
namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed, double scale = 1.0) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  Matrix m(r, c);
  for (double& v : m.values()) v = normal(rng);
  return m;
}

struct OwnedWeights {
  std::vector<Matrix> w1;
  std::vector<Matrix> w2;
  Matrix self1;
  Matrix self2;

  RelGcnWeights view(bool self_loops, FinalActivation act) const {
    RelGcnWeights v;
    for (const Matrix& m : w1) v.w1.push_back(&m);
    for (const Matrix& m : w2) v.w2.push_back(&m);
    if (self_loops) {
      v.self1 = &self1;
      v.self2 = &self2;
    }
    v.final_activation = act;
    return v;
  }
};

OwnedWeights random_weights(std::size_t m, std::size_t d, std::size_t relations,
                            std::uint64_t seed) {
  OwnedWeights w;
  for (std::size_t r = 0; r < relations; ++r) {
    w.w1.push_back(random_matrix(m, d, seed + 10 * r, 0.5));
    w.w2.push_back(random_matrix(d, d, seed + 10 * r + 1, 0.5));
  }
  w.self1 = random_matrix(m, d, seed + 100, 0.5);
  w.self2 = random_matrix(d, d, seed + 101, 0.5);
  return w;
}

// Builds the normalized relation matrices entry by entry and evaluates both
// layers with plain loops.
Matrix straight_line_rgcn(std::size_t n, std::size_t relations, const std::vector<Triple>& triples,
                          const Matrix& x, const OwnedWeights& w, bool self_loops) {
  std::vector<std::vector<std::vector<double>>> a(
      relations, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
  for (const Triple& t : triples) {
    a[t.relation][t.head][t.tail] = 1.0;
    a[t.relation][t.tail][t.head] = 1.0;
  }
  for (auto& ar : a) {
    for (auto& row : ar) {
      double deg = 0.0;
      for (double v : row) deg += v;
      if (deg > 0.0) {
        for (double& v : row) v /= deg;
      }
    }
  }
  auto layer = [&](const Matrix& in, const std::vector<Matrix>& per_rel, const Matrix& self) {
    const std::size_t d = self.cols();
    Matrix out(n, d);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < d; ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < relations; ++r)
          for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < in.cols(); ++k) s += a[r][i][j] * in(j, k) * per_rel[r](k, c);
        if (self_loops)
          for (std::size_t k = 0; k < in.cols(); ++k) s += in(i, k) * self(k, c);
        out(i, c) = s;
      }
    }
    return out;
  };
  Matrix h1 = layer(x, w.w1, w.self1);
  for (double& v : h1.values()) v = std::max(v, 0.0);
  Matrix h2 = layer(h1, w.w2, w.self2);
  for (std::size_t i = 0; i < n; ++i) {
    double mx = -1e300;
    for (double v : h2.row(i)) mx = std::max(mx, v);
    double z = 0.0;
    for (double v : h2.row(i)) z += std::exp(v - mx);
    for (double& v : h2.row(i)) v = std::exp(v - mx) / z;
  }
  return h2;
}

TEST(RgcnForwardTest, MatchesStraightLineEvaluation) {
  const std::vector<Triple> triples = {{0, 1, 0}, {1, 2, 0}, {2, 3, 1}, {3, 4, 1},
                                       {4, 5, 0}, {5, 0, 1}, {0, 3, 1}, {1, 4, 0}};
  const Matrix x = random_matrix(6, 4, 1);
  const OwnedWeights w = random_weights(4, 3, 2, 2);
  const RelInput input = RelInput::make(6, 2, triples, x);
  for (bool self_loops : {true, false}) {
    const Matrix u = rgcn_forward(input, w.view(self_loops, FinalActivation::kRowSoftmax)).u;
    EXPECT_LT(max_abs(u - straight_line_rgcn(6, 2, triples, x, w, self_loops)), 1e-12);
  }
}

TEST(RgcnForwardTest, NoTriplesLeavesTheSelfLoopPath) {
  const Matrix x = random_matrix(4, 3, 3);
  const OwnedWeights w = random_weights(3, 2, 2, 4);
  const Matrix u = rgcn_forward(RelInput::make(4, 2, {}, x),
                                w.view(true, FinalActivation::kRowSoftmax)).u;
  Matrix h1 = matmul(x, w.self1);
  for (double& v : h1.values()) v = std::max(v, 0.0);
  EXPECT_LT(max_abs(u - row_softmax(matmul(h1, w.self2))), 1e-14);
}

TEST(RgcnForwardTest, SingleRelationReducesToGcnOnRegularGraph) {
  // On a cycle, every node with its self-loop has 3 neighbours, so
  // 1/c_i = D^{-1/2} (A + I) D^{-1/2} entrywise.
  const std::size_t n = 6;
  std::vector<Triple> triples;
  std::vector<WeightedLink> links;
  for (std::size_t i = 0; i < n; ++i) {
    triples.push_back({i, (i + 1) % n, 0});
    triples.push_back({i, i, 0});
    links.push_back({i, (i + 1) % n, 1.0});
  }
  const Matrix x = random_matrix(n, 3, 5);
  const OwnedWeights w = random_weights(3, 2, 1, 6);
  const Graph g = Graph::from_links(n, links, x);
  for (FinalActivation act : {FinalActivation::kRowSoftmax, FinalActivation::kIdentity}) {
    const Matrix rel = rgcn_forward(RelInput::make(n, 1, triples, x), w.view(false, act)).u;
    const GcnParams p{std::nullopt, w.w1[0], w.w2[0], act};
    const Matrix plain = gcn_forward(normalize_adjacency(g), x, p).u;
    EXPECT_LT(max_abs(rel - plain), 1e-10);
  }
}

TEST(RelationNormalizersTest, PerNodeAndGlobal) {
  const std::vector<Triple> triples = {{0, 1, 0}, {0, 2, 0}, {1, 2, 1}};
  const Matrix c = relation_normalizers(4, 2, triples);
  EXPECT_EQ(c, Matrix({{2, 0}, {1, 1}, {1, 1}, {0, 0}}));
  const Matrix g = relation_normalizers(4, 2, triples, RelNormalization::kGlobal);
  EXPECT_DOUBLE_EQ(g(0, 0), 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(g(1, 0), 4.0 / 3.0);
  EXPECT_EQ(g(3, 0), 0.0);
  EXPECT_EQ(g(1, 1), 1.0);
}

TEST(DistMultTest, Examples) {
  const Matrix u = {{1, 1, 1}, {1, 1, 1}, {0.5, -2, 3}};
  const std::vector<Triple> t = {{0, 1, 0}, {0, 1, 1}};
  const Matrix d = {{0, 0, 0}, {1, 1, 1}};
  const std::vector<double> s = distmult_score(u, d, t);
  EXPECT_EQ(s[0], 0.5);
  EXPECT_DOUBLE_EQ(s[1], sigmoid(3.0));
}

TEST(DistMultTest, SymmetricInHeadAndTail) {
  const Matrix u = random_matrix(5, 3, 7);
  const Matrix d = random_matrix(2, 3, 8);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      for (std::size_t r = 0; r < 2; ++r) {
        EXPECT_EQ(distmult_logit(u, d, {i, j, r}), distmult_logit(u, d, {j, i, r}));
      }
    }
  }
}

TEST(RelationalLossTest, ExamplesAndGradients) {
  const Matrix u = random_matrix(5, 3, 9);
  const Matrix d = random_matrix(2, 3, 10);
  EXPECT_EQ(relational_loss(u, d, {}, {}), 0.0);
  EXPECT_NEAR(relational_loss(u, Matrix(2, 3), {{0, 1, 0}}, {}), std::log(2.0), 1e-15);

  const std::vector<Triple> pos = {{0, 1, 0}, {1, 2, 1}, {3, 4, 0}};
  const std::vector<Triple> neg = {{0, 4, 1}, {2, 3, 0}};
  const RelationalLossValue v = relational_loss_with_gradient(u, d, pos, neg);
  EXPECT_DOUBLE_EQ(v.loss, relational_loss(u, d, pos, neg));
  const Matrix numeric_d = finite_diff_gradient(
      [&](const Matrix& x) { return relational_loss(u, x, pos, neg); }, d, 1e-6);
  const Matrix numeric_u = finite_diff_gradient(
      [&](const Matrix& x) { return relational_loss(x, d, pos, neg); }, u, 1e-6);
  EXPECT_LT(frobenius_norm(v.grad_d - numeric_d), 1e-4 * frobenius_norm(numeric_d));
  EXPECT_LT(frobenius_norm(v.grad_u - numeric_u), 1e-4 * frobenius_norm(numeric_u));
}

TEST(CorruptionTest, AvoidsKnownTriples) {
  std::vector<Triple> pos;
  for (std::size_t i = 0; i + 1 < 30; ++i) pos.push_back({i, i + 1, i % 2});
  const std::set<Triple> known(pos.begin(), pos.end());
  const std::vector<Triple> neg = sample_corrupted_triples(30, pos, known, 3);
  ASSERT_EQ(neg.size(), pos.size());
  for (std::size_t k = 0; k < neg.size(); ++k) {
    EXPECT_EQ(known.count(neg[k]), 0u);
    EXPECT_EQ(neg[k].relation, pos[k].relation);
    EXPECT_TRUE(neg[k].head == pos[k].head || neg[k].tail == pos[k].tail);
  }
  EXPECT_EQ(neg, sample_corrupted_triples(30, pos, known, 3));
}

SyntheticPairSpec small_spec() {
  SyntheticPairSpec s;
  s.blocks = 2;
  s.nodes_per_block = 6;
  s.p_intra = 0.6;
  s.p_inter = 0.2;
  s.rho = 0.5;
  s.relations = 2;
  s.seed = 4;
  return s;
}

RelCrossData small_data(RelOptions options = {}) {
  const SyntheticRelationalPair p = generate_synthetic_relational_pair(small_spec());
  RelCrossData data;
  data.options = options;
  data.graphs.push_back(prepare_relational_task(p.a, 1, options));
  data.graphs.push_back(prepare_relational_task(p.b, 2, options));
  data.alignments.push_back({0, 1, p.alignment});
  return data;
}

TEST(RelationalModelTest, SupportedVariants) {
  for (VariantId id : all_variants()) {
    const bool expected = id == VariantId::kSeparated || id == VariantId::kM1 ||
                          id == VariantId::kM2 || id == VariantId::kM5 ||
                          id == VariantId::kM11 || id == VariantId::kM12 ||
                          id == VariantId::kM13;
    EXPECT_EQ(supports_relational(id), expected) << to_string(id);
  }
}

TEST(RelationalModelTest, GradientsMatchFiniteDifferences) {
  for (bool self_loops : {true, false}) {
    RelOptions options;
    options.self_loops = self_loops;
    const RelCrossData data = small_data(options);
    for (VariantId id : all_variants()) {
      if (!supports_relational(id)) continue;
      const ModelConfig c = config_for_variant(id, 3);
      RelCrossParams p = build_relational_model(c, data, 5);
      const ObjectiveValue obj = relational_combined_loss(c, p, data, 9);
      // Relative error per parameter matrix; entry-wise ratios on
      // gradients near 1e-6 are dominated by round-off.
      double worst = 0.0;
      for (std::size_t s = 0; s < p.store.size(); ++s) {
        Matrix& m = p.store.at(s);
        Matrix numeric(m.rows(), m.cols());
        for (std::size_t e = 0; e < m.size(); ++e) {
          const double old = m.values()[e];
          m.values()[e] = old + 1e-5;
          const double up = relational_combined_loss(c, p, data, 9).total;
          m.values()[e] = old - 1e-5;
          const double down = relational_combined_loss(c, p, data, 9).total;
          m.values()[e] = old;
          numeric.values()[e] = (up - down) / 2e-5;
        }
        const double scale = frobenius_norm(numeric) + frobenius_norm(obj.gradients[s]);
        if (scale > 0.0) {
          worst = std::max(worst, frobenius_norm(numeric - obj.gradients[s]) / scale);
        }
      }
      EXPECT_LT(worst, 1e-4) << to_string(id) << " self_loops " << self_loops;
    }
  }
}

TEST(RelationalModelTest, BetaZeroM13MatchesM11) {
  const RelCrossData data = small_data();
  ModelConfig m13 = config_for_variant(VariantId::kM13, 3);
  m13.beta = 0.0;
  const ModelConfig m11 = config_for_variant(VariantId::kM11, 3);
  const RelCrossParams p13 = build_relational_model(m13, data, 6);
  const RelCrossParams p11 = build_relational_model(m11, data, 6);
  const ObjectiveValue a = relational_combined_loss(m13, p13, data, 2);
  const ObjectiveValue b = relational_combined_loss(m11, p11, data, 2);
  EXPECT_EQ(a.total, b.total);
  for (std::size_t s = 0; s < p11.store.size(); ++s) {
    const auto slot = p13.store.find(p11.store.name(s));
    ASSERT_TRUE(slot.has_value());
    EXPECT_EQ(a.gradients[*slot], b.gradients[s]);
  }
}

TEST(RelationalModelTest, SchemaMismatch) {
  RelOptions strict;
  strict.require_equal_schema = true;
  RelCrossData data = small_data(strict);
  data.graphs[1].graph.num_relations += 1;
  data.graphs[1].input = RelInput::make(data.graphs[1].graph.num_entities,
                                        data.graphs[1].graph.num_relations,
                                        data.graphs[1].split.train, data.graphs[1].graph.features);
  EXPECT_THROW(build_relational_model(config_for_variant(VariantId::kM11, 3), data, 1),
               ConfigError);
  EXPECT_NO_THROW(build_relational_model(config_for_variant(VariantId::kSeparated, 3), data, 1));
  data.options.require_equal_schema = false;
  const RelCrossParams p =
      build_relational_model(config_for_variant(VariantId::kM11, 3), data, 1);
  EXPECT_EQ(p.graphs[0].w1[0], p.graphs[1].w1[0]);
  EXPECT_EQ(p.graphs[1].w1.size(), p.graphs[0].w1.size() + 1);
  EXPECT_NE(p.graphs[0].core, p.graphs[1].core);
}

TEST(RelationalModelTest, EvaluationMatchesRankingOracle) {
  const RelCrossData data = small_data();
  const RelationalTask& task = data.graphs[0];
  const Matrix u = random_matrix(task.graph.num_entities, 3, 11);
  const Matrix d = random_matrix(task.graph.num_relations, 3, 12);
  const std::vector<Triple> known(task.known.begin(), task.known.end());
  const RankingMetrics oracle = mrr_hits(
      [&](std::size_t h, std::size_t r, std::size_t t) { return distmult_logit(u, d, {h, t, r}); },
      task.graph.num_entities, task.split.test, known);
  const RankingMetrics got = evaluate_relations(u, d, task, SplitPart::kTest);
  EXPECT_DOUBLE_EQ(got.mrr_raw, oracle.mrr_raw);
  EXPECT_DOUBLE_EQ(got.mrr_filtered, oracle.mrr_filtered);
  EXPECT_EQ(got.hits_filtered, oracle.hits_filtered);
}

TEST(RelationalTrainTest, DeterministicAndFinite) {
  const RelCrossData data = small_data();
  ModelConfig c = config_for_variant(VariantId::kM13, 3);
  c.epochs = 5;
  const RelTrainResult a = train_relational(c, data, 3);
  const RelTrainResult b = train_relational(c, data, 3);
  EXPECT_EQ(a.loss_trace, b.loss_trace);
  for (double l : a.loss_trace) EXPECT_TRUE(std::isfinite(l));
}

}  // namespace
}  // namespace pagcn
