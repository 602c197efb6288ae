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
#include <functional>
#include <vector>

#include "pagcn/matrix.hpp"

namespace pagcn {

enum class Activation { kRelu, kSigmoid, kRowSoftmax };

// Elementwise relu/sigmoid or row-wise softmax. Throws NumericDomainError on
// non-finite input.
Matrix activate(const Matrix& m, Activation kind);
Matrix relu(const Matrix& m);
Matrix sigmoid(const Matrix& m);
Matrix row_softmax(const Matrix& m);

double sigmoid(double x);

// Thin SVD: m = u * diag(singular_values) * v^T with k = min(rows, cols)
// columns in u and v. Singular values are sorted non-increasing.
struct SvdResult {
  Matrix u;
  std::vector<double> singular_values;
  Matrix v;
};

SvdResult svd(const Matrix& m);

inline constexpr double kDefaultPinvTolerance = 1e-10;

// Moore-Penrose pseudoinverse. Singular values below tol * s_max are zeroed.
Matrix pseudoinverse(const Matrix& m, double tol = kDefaultPinvTolerance);

// Eigen-decomposition of a symmetric matrix, eigenvalues sorted by
// decreasing magnitude. Columns of `vectors` are orthonormal.
struct SymmetricEigen {
  std::vector<double> values;
  Matrix vectors;
};

SymmetricEigen symmetric_eigen(const Matrix& m);

struct AdamConfig {
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  Matrix first_moment;
  Matrix second_moment;
  std::uint64_t step = 0;
  AdamConfig config;

  static AdamState for_parameter(const Matrix& param, AdamConfig config = {});
};

// One bias-corrected Adam update, in place. A gradient that is identically
// zero leaves both the parameter and the state untouched.
void adam_step(Matrix& param, const Matrix& grad, AdamState& state);

using ScalarFunction = std::function<double(const Matrix&)>;

// Central differences (f(x + h e_k) - f(x - h e_k)) / 2h for every entry.
Matrix finite_diff_gradient(const ScalarFunction& loss_fn, const Matrix& at,
                            double h);

// ||a - b||_F / max(||a||_F, ||b||_F, 1e-8): the gradient-check metric.
double relative_error(const Matrix& analytic, const Matrix& reference);

}  // namespace pagcn
