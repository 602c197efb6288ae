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
#include "pagcn/graph.hpp"
#include "pagcn/numerics.hpp"
#include "pagcn/random.hpp"

namespace pagcn {
namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed, double scale = 1.0) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  Matrix m(r, c);
  for (double& v : m.values()) v = normal(rng);
  return m;
}

Graph random_graph(std::size_t n, std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<WeightedLink> links;
  for (std::size_t i = 0; i < n; ++i) {
    links.push_back({i, (i + 1) % n, 1.0});
    for (std::size_t j = i + 2; j < n; ++j) {
      if (uniform_real(rng, 0, 1) < 0.3) links.push_back({i, j, 1.0 + uniform_index(rng, 2)});
    }
  }
  return Graph::from_links(n, links, random_matrix(n, m, seed + 1));
}

// Scalar re-evaluation of act(A ReLU(A X Q W1) W2), written without the
// matrix kernels.
Matrix straight_line_forward(const Matrix& a, const Matrix& x, const Matrix* q,
                             const Matrix& w1, const Matrix& w2, FinalActivation act) {
  const std::size_t n = a.rows();
  Matrix xq = x;
  if (q != nullptr) {
    xq = Matrix(n, q->cols());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < q->cols(); ++j)
        for (std::size_t k = 0; k < x.cols(); ++k) xq(i, j) += x(i, k) * (*q)(k, j);
  }
  Matrix h1(n, w1.cols());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < w1.cols(); ++c) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < xq.cols(); ++k) s += a(i, j) * xq(j, k) * w1(k, c);
      h1(i, c) = s > 0.0 ? s : 0.0;
    }
  }
  Matrix u(n, w2.cols());
  for (std::size_t i = 0; i < n; ++i) {
    double row_max = -1e300;
    for (std::size_t c = 0; c < w2.cols(); ++c) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < h1.cols(); ++k) s += a(i, j) * h1(j, k) * w2(k, c);
      u(i, c) = s;
      row_max = std::max(row_max, s);
    }
    if (act == FinalActivation::kRowSoftmax) {
      double z = 0.0;
      for (std::size_t c = 0; c < w2.cols(); ++c) z += std::exp(u(i, c) - row_max);
      for (std::size_t c = 0; c < w2.cols(); ++c) u(i, c) = std::exp(u(i, c) - row_max) / z;
    }
  }
  return u;
}

TEST(GcnForwardTest, ZeroFirstLayerGivesUniformRows) {
  const Graph g = random_graph(5, 3, 1);
  GcnParams p = init_params(3, 0, 4, 2);
  p.w1 = Matrix(3, 4);
  const ForwardCache c = gcn_forward(normalize_adjacency(g), g.features, p);
  EXPECT_EQ(c.h1, Matrix(5, 4));
  for (double v : c.u.values()) EXPECT_DOUBLE_EQ(v, 0.25);
}

TEST(GcnForwardTest, SingleNode) {
  GcnParams p{std::nullopt, Matrix({{2}}), Matrix({{1}})};
  const ForwardCache c = gcn_forward(NormalizedAdjacency{Matrix({{1}})}, Matrix({{1}}), p);
  EXPECT_EQ(c.u, Matrix({{1}}));
}

TEST(GcnForwardTest, MatchesStraightLineEvaluation) {
  const Graph g = random_graph(6, 4, 3);
  const NormalizedAdjacency a = normalize_adjacency(g);
  for (FinalActivation act : {FinalActivation::kRowSoftmax, FinalActivation::kIdentity}) {
    for (std::size_t m_hat : {0u, 3u}) {
      const GcnParams p = init_params(4, m_hat, 3, 7, act);
      const Matrix expected = straight_line_forward(a.matrix, g.features,
                                                    p.q ? &*p.q : nullptr, p.w1, p.w2, act);
      EXPECT_LT(max_abs(gcn_forward(a, g.features, p).u - expected), 1e-12);
    }
  }
}

TEST(GcnForwardTest, DeterministicAndShapeChecked) {
  const Graph g = random_graph(6, 4, 4);
  const GcnParams p = init_params(4, 0, 3, 8);
  const NormalizedAdjacency a = normalize_adjacency(g);
  EXPECT_EQ(gcn_forward(a, g.features, p).u, gcn_forward(a, g.features, p).u);
  const GcnParams wrong = init_params(5, 0, 3, 8);
  EXPECT_THROW(gcn_forward(a, g.features, wrong), ContractError);
}

TEST(DecodeTest, Examples) {
  EXPECT_EQ(decode(Matrix(3, 2)), Matrix({{0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}}));
  const Matrix d = decode(Matrix::identity(2));
  EXPECT_NEAR(d(0, 0), 0.7310585786300049, 1e-15);
  EXPECT_EQ(d(0, 1), 0.5);
}

TEST(DecodeTest, SymmetricAndStrictlyInsideUnitInterval) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix d = decode(random_matrix(7, 3, seed, 3.0));
    for (std::size_t i = 0; i < 7; ++i) {
      for (std::size_t j = 0; j < 7; ++j) {
        EXPECT_EQ(d(i, j), d(j, i));
        EXPECT_GT(d(i, j), 0.0);
        EXPECT_LT(d(i, j), 1.0);
      }
    }
  }
}

TEST(ReconLossTest, Examples) {
  EXPECT_EQ(recon_loss(Matrix(2, 1), {}, {}), 0.0);
  EXPECT_NEAR(recon_loss(Matrix(2, 1), {{0, 1, 2.0}}, {}), 2.0 * std::log(2.0), 1e-15);
  double previous = 1e300;
  for (double scale : {0.0, 1.0, 2.0, 3.0, 4.0}) {
    const double loss = recon_loss(Matrix({{scale}, {scale}}), {{0, 1, 1.0}}, {});
    EXPECT_LT(loss, previous);
    EXPECT_GE(loss, 0.0);
    previous = loss;
  }
  EXPECT_LT(previous, 1e-6);
  EXPECT_NEAR(recon_loss(Matrix(2, 1), {}, {{0, 1}}), std::log(2.0), 1e-15);
}

TEST(ReconLossTest, ClampKeepsSaturatedLossFinite) {
  const double loss = recon_loss(Matrix({{100.0}, {-100.0}}), {{0, 1, 1.0}}, {});
  EXPECT_NEAR(loss, -std::log(kProbabilityClamp), 1e-9);
}

TEST(ReconLossTest, DescendsAlongNegativeGradient) {
  Matrix u = random_matrix(6, 2, 9, 0.3);
  const std::vector<WeightedLink> pos = {{0, 1, 1.0}, {2, 3, 2.0}, {4, 5, 1.0}};
  const std::vector<NodePair> neg = {{0, 5}, {1, 3}};
  double previous = recon_loss(u, pos, neg);
  for (int step = 0; step < 20; ++step) {
    const LossWithGradient lg = recon_loss_with_gradient(u, pos, neg);
    EXPECT_DOUBLE_EQ(lg.loss, previous);
    u -= 0.05 * lg.grad_u;
    const double next = recon_loss(u, pos, neg);
    EXPECT_LT(next, previous);
    previous = next;
  }
}

double relative_gap(const Matrix& analytic, const Matrix& numeric) {
  return frobenius_norm(analytic - numeric) /
         std::max(1e-8, frobenius_norm(analytic) + frobenius_norm(numeric));
}

struct Instance {
  Graph graph;
  GcnInput input;
  std::vector<WeightedLink> positives;
  std::vector<NodePair> negatives;
};

Instance make_instance(std::size_t n, std::size_t m, std::uint64_t seed) {
  Instance inst{random_graph(n, m, seed), {}, {}, {}};
  inst.input = GcnInput::make(normalize_adjacency(inst.graph), inst.graph.features);
  inst.positives = upper_links(inst.graph);
  inst.negatives = sample_training_negatives(inst.graph, inst.positives.size(), 1, seed);
  return inst;
}

TEST(GcnBackwardTest, ZeroUpstreamGradientGivesZeroGradients) {
  const Instance inst = make_instance(8, 4, 11);
  const GcnParams p = init_params(4, 2, 3, 12);
  const ForwardCache c = gcn_forward(inst.input, p.view());
  const GcnGradients g = gcn_backward(inst.input, c, Matrix(8, 3), p.view());
  EXPECT_EQ(g.w1, Matrix(2, 3));
  EXPECT_EQ(g.w2, Matrix(3, 3));
  EXPECT_EQ(*g.q, Matrix(4, 2));
}

TEST(GcnBackwardTest, MatchesFiniteDifferences) {
  for (std::uint64_t seed = 20; seed < 24; ++seed) {
    const Instance inst = make_instance(8 + seed % 4, 5, seed);
    for (FinalActivation act : {FinalActivation::kRowSoftmax, FinalActivation::kIdentity}) {
      for (std::size_t m_hat : {0u, 3u}) {
        GcnParams p = init_params(5, m_hat, 3, seed * 7, act);
        auto loss_of = [&](const GcnParams& params) {
          return recon_loss(gcn_forward(inst.input, params.view()).u, inst.positives,
                            inst.negatives);
        };
        const ForwardCache cache = gcn_forward(inst.input, p.view());
        const LossWithGradient lg =
            recon_loss_with_gradient(cache.u, inst.positives, inst.negatives);
        const GcnGradients g = gcn_backward(inst.input, cache, lg.grad_u, p.view());

        auto fd = [&](Matrix GcnParams::*member) {
          return finite_diff_gradient(
              [&](const Matrix& value) {
                GcnParams copy = p;
                copy.*member = value;
                return loss_of(copy);
              },
              p.*member, 1e-6);
        };
        EXPECT_LT(relative_gap(g.w1, fd(&GcnParams::w1)), 1e-4);
        EXPECT_LT(relative_gap(g.w2, fd(&GcnParams::w2)), 1e-4);
        if (m_hat > 0) {
          const Matrix numeric_q = finite_diff_gradient(
              [&](const Matrix& value) {
                GcnParams copy = p;
                copy.q = value;
                return loss_of(copy);
              },
              *p.q, 1e-6);
          EXPECT_LT(relative_gap(*g.q, numeric_q), 1e-4);
        }
      }
    }
  }
}

TEST(InitParamsTest, GlorotBoundsAndDeterminism) {
  const GcnParams a = init_params(6, 4, 3, 1);
  const GcnParams b = init_params(6, 4, 3, 1);
  const GcnParams c = init_params(6, 4, 3, 2);
  EXPECT_EQ(a.w1, b.w1);
  EXPECT_EQ(*a.q, *b.q);
  EXPECT_NE(a.w1, c.w1);
  EXPECT_EQ(a.q->rows(), 6u);
  EXPECT_EQ(a.w1.rows(), 4u);
  EXPECT_EQ(a.dim(), 3u);
  const double bound = std::sqrt(6.0 / (6 + 4));
  for (double v : a.q->values()) EXPECT_LE(std::abs(v), bound);
  EXPECT_FALSE(init_params(6, 0, 3, 1).q.has_value());
}

}  // namespace
}  // namespace pagcn
