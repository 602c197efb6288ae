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

#include "pagcn/gcn.hpp"

#include <cmath>

#include "pagcn/errors.hpp"
#include "pagcn/numerics.hpp"
#include "pagcn/random.hpp"

namespace pagcn {
namespace {

double clamped_probability(double score) {
  const double p = sigmoid(score);
  return std::min(std::max(p, kProbabilityClamp), 1.0 - kProbabilityClamp);
}

void check_weights(const GcnInput& input, const GcnWeights& w) {
  if (w.w1 == nullptr || w.w2 == nullptr) throw ContractError("gcn: missing W1/W2");
  const std::size_t in_dim = w.q ? w.q->cols() : input.a_hat_x.cols();
  if (w.q && w.q->rows() != input.a_hat_x.cols()) {
    throw ContractError("gcn: Q has " + std::to_string(w.q->rows()) +
                        " rows but features have " +
                        std::to_string(input.a_hat_x.cols()) + " columns");
  }
  if (w.w1->rows() != in_dim) {
    throw ContractError("gcn: W1 is " + w.w1->shape_string() + " but input dim is " +
                        std::to_string(in_dim));
  }
  if (w.w2->rows() != w.w1->cols() || w.w2->cols() < 1) {
    throw ContractError("gcn: W2 is " + w.w2->shape_string() + ", W1 is " +
                        w.w1->shape_string());
  }
}

}  // namespace

GcnInput GcnInput::make(const NormalizedAdjacency& a_hat, const Matrix& features) {
  if (a_hat.matrix.rows() != features.rows()) {
    throw ContractError("gcn: adjacency has " + std::to_string(a_hat.matrix.rows()) +
                        " nodes but features have " + std::to_string(features.rows()));
  }
  return GcnInput{a_hat.matrix, matmul(a_hat.matrix, features)};
}

ForwardCache gcn_forward(const GcnInput& input, const GcnWeights& weights) {
  check_weights(input, weights);
  ForwardCache c;
  c.layer1_input = weights.q ? matmul(input.a_hat_x, *weights.q) : input.a_hat_x;
  c.h1_pre = matmul(c.layer1_input, *weights.w1);
  c.h1 = relu(c.h1_pre);
  c.layer2_input = matmul(input.a_hat, c.h1);
  c.h2_pre = matmul(c.layer2_input, *weights.w2);
  c.u = weights.final_activation == FinalActivation::kRowSoftmax ? row_softmax(c.h2_pre)
                                                                 : c.h2_pre;
  return c;
}

ForwardCache gcn_forward(const NormalizedAdjacency& a_hat, const Matrix& features,
                         const GcnParams& params) {
  return gcn_forward(GcnInput::make(a_hat, features), params.view());
}

Matrix final_activation_backward(const Matrix& u, const Matrix& grad_u,
                                 FinalActivation activation) {
  require_same_shape(u, grad_u, "final activation backward");
  if (activation == FinalActivation::kIdentity) return grad_u;
  Matrix out(u.rows(), u.cols());
  for (std::size_t i = 0; i < u.rows(); ++i) {
    const double inner = dot(u.row(i), grad_u.row(i));
    for (std::size_t k = 0; k < u.cols(); ++k) {
      out(i, k) = u(i, k) * (grad_u(i, k) - inner);
    }
  }
  return out;
}

GcnGradients gcn_backward(const GcnInput& input, const ForwardCache& cache,
                          const Matrix& grad_u, const GcnWeights& weights) {
  check_weights(input, weights);
  if (!grad_u.same_shape(cache.u) || cache.h1_pre.cols() != weights.w1->cols() ||
      cache.layer1_input.cols() != weights.w1->rows()) {
    throw ContractError("gcn_backward: cache does not match weights or gradient");
  }
  GcnGradients g;
  const Matrix grad_h2 = final_activation_backward(cache.u, grad_u, weights.final_activation);
  g.w2 = matmul_tn(cache.layer2_input, grad_h2);
  Matrix grad_h1 = matmul_tn(input.a_hat, matmul_nt(grad_h2, *weights.w2));
  for (std::size_t k = 0; k < grad_h1.size(); ++k) {
    if (!(cache.h1_pre.values()[k] > 0.0)) grad_h1.values()[k] = 0.0;
  }
  g.w1 = matmul_tn(cache.layer1_input, grad_h1);
  if (weights.q) {
    g.q = matmul_tn(input.a_hat_x, matmul_nt(grad_h1, *weights.w1));
  }
  return g;
}

Matrix decode(const Matrix& u) {
  Matrix scores = matmul_nt(u, u);
  for (double& v : scores.values()) v = clamped_probability(v);
  return scores;
}

double recon_loss(const Matrix& u, const std::vector<WeightedLink>& positives,
                  const std::vector<NodePair>& negatives) {
  double loss = 0.0;
  for (const WeightedLink& l : positives) {
    loss -= l.weight * std::log(clamped_probability(dot(u.row(l.i), u.row(l.j))));
  }
  for (const NodePair& p : negatives) {
    loss -= std::log(1.0 - clamped_probability(dot(u.row(p.i), u.row(p.j))));
  }
  return loss;
}

LossWithGradient recon_loss_with_gradient(const Matrix& u,
                                          const std::vector<WeightedLink>& positives,
                                          const std::vector<NodePair>& negatives) {
  LossWithGradient out{0.0, Matrix(u.rows(), u.cols())};
  auto accumulate = [&](std::size_t i, std::size_t j, double coeff) {
    // d(u_i . u_j) adds coeff * u_j to row i and coeff * u_i to row j.
    auto gi = out.grad_u.row(i);
    auto gj = out.grad_u.row(j);
    auto ui = u.row(i);
    auto uj = u.row(j);
    for (std::size_t k = 0; k < u.cols(); ++k) {
      gi[k] += coeff * uj[k];
      gj[k] += coeff * ui[k];
    }
  };
  for (const WeightedLink& l : positives) {
    const double s = dot(u.row(l.i), u.row(l.j));
    out.loss -= l.weight * std::log(clamped_probability(s));
    accumulate(l.i, l.j, -l.weight * (1.0 - sigmoid(s)));
  }
  for (const NodePair& p : negatives) {
    const double s = dot(u.row(p.i), u.row(p.j));
    out.loss -= std::log(1.0 - clamped_probability(s));
    accumulate(p.i, p.j, sigmoid(s));
  }
  return out;
}

Matrix glorot_uniform(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Matrix m(rows, cols);
  for (double& v : m.values()) v = uniform_real(rng, -bound, bound);
  return m;
}

GcnParams init_params(std::size_t m, std::size_t m_hat, std::size_t d,
                      std::uint64_t seed, FinalActivation final_activation) {
  if (m < 1 || d < 1) throw ContractError("init_params: dimensions must be >= 1");
  GcnParams p;
  std::size_t in_dim = m;
  if (m_hat > 0) {
    p.q = glorot_uniform(m, m_hat, derive_seed(seed, "Q"));
    in_dim = m_hat;
  }
  p.w1 = glorot_uniform(in_dim, d, derive_seed(seed, "W1"));
  p.w2 = glorot_uniform(d, d, derive_seed(seed, "W2"));
  p.final_activation = final_activation;
  return p;
}

}  // namespace pagcn
