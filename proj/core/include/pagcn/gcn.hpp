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
#include <vector>

#include "pagcn/graph.hpp"
#include "pagcn/matrix.hpp"

namespace pagcn {

enum class FinalActivation { kRowSoftmax, kIdentity };

// Non-owning view of one graph's two-layer GCN weights. `q` is the optional
// feature transform applied as X * Q before the first layer. Views let
// several graphs point at the same shared storage.
struct GcnWeights {
  const Matrix* q = nullptr;
  const Matrix* w1 = nullptr;
  const Matrix* w2 = nullptr;
  FinalActivation final_activation = FinalActivation::kRowSoftmax;
};

// Owning parameters for a single graph.
struct GcnParams {
  std::optional<Matrix> q;
  Matrix w1;
  Matrix w2;
  FinalActivation final_activation = FinalActivation::kRowSoftmax;

  std::size_t dim() const { return w2.cols(); }
  GcnWeights view() const {
    return {q ? &*q : nullptr, &w1, &w2, final_activation};
  }
};

// Graph-side constants of the forward pass: A_hat and A_hat * X.
struct GcnInput {
  Matrix a_hat;
  Matrix a_hat_x;

  static GcnInput make(const NormalizedAdjacency& a_hat, const Matrix& features);
};

struct ForwardCache {
  Matrix layer1_input;   // A_hat X Q (or A_hat X)
  Matrix h1_pre;
  Matrix h1;             // ReLU(h1_pre)
  Matrix layer2_input;   // A_hat h1
  Matrix h2_pre;
  Matrix u;              // final activation of h2_pre
};

// U = act(A_hat ReLU(A_hat X Q W1) W2).
ForwardCache gcn_forward(const GcnInput& input, const GcnWeights& weights);
ForwardCache gcn_forward(const NormalizedAdjacency& a_hat, const Matrix& features,
                         const GcnParams& params);

struct GcnGradients {
  Matrix w1;
  Matrix w2;
  std::optional<Matrix> q;
};

// Backpropagates dL/dU through the cached forward pass. ReLU'(0) = 0.
GcnGradients gcn_backward(const GcnInput& input, const ForwardCache& cache,
                          const Matrix& grad_u, const GcnWeights& weights);

// Backward through the final activation only: dL/dH2pre from dL/dU.
Matrix final_activation_backward(const Matrix& u, const Matrix& grad_u,
                                 FinalActivation activation);

// sigma(U U^T), clamped into [1e-12, 1 - 1e-12] like the loss.
Matrix decode(const Matrix& u);

inline constexpr double kProbabilityClamp = 1e-12;

struct LossWithGradient {
  double loss = 0.0;
  Matrix grad_u;
};

// -sum_pos w log sigma(u_i.u_j) - sum_neg log(1 - sigma(u_i.u_j)), with the
// sigmoid clamped into [1e-12, 1 - 1e-12].
double recon_loss(const Matrix& u, const std::vector<WeightedLink>& positives,
                  const std::vector<NodePair>& negatives);
LossWithGradient recon_loss_with_gradient(
    const Matrix& u, const std::vector<WeightedLink>& positives,
    const std::vector<NodePair>& negatives);

// Glorot-uniform entries in +-sqrt(6 / (rows + cols)).
Matrix glorot_uniform(std::size_t rows, std::size_t cols, std::uint64_t seed);

// m_hat == 0 means no feature transform: W1 is m x d. Otherwise Q is
// m x m_hat and W1 is m_hat x d.
GcnParams init_params(std::size_t m, std::size_t m_hat, std::size_t d,
                      std::uint64_t seed,
                      FinalActivation final_activation = FinalActivation::kRowSoftmax);

}  // namespace pagcn
