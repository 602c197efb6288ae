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
#include "pagcn/matrix.hpp"
#include "pagcn/numerics.hpp"
#include "pagcn/random.hpp"

namespace pagcn {
namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(r, c);
  for (double& v : m.values()) v = normal(rng);
  return m;
}

// Triple loop, the reference for the blocked kernels.
Matrix naive_product(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      out(i, j) = s;
    }
  }
  return out;
}

TEST(MatrixTest, ProductsAgreeWithTripleLoop) {
  const Matrix a = random_matrix(7, 5, 1);
  const Matrix b = random_matrix(5, 4, 2);
  const Matrix c = random_matrix(7, 4, 3);
  EXPECT_LT(max_abs(matmul(a, b) - naive_product(a, b)), 1e-12);
  EXPECT_LT(max_abs(matmul_tn(a, c) - naive_product(transpose(a), c)), 1e-12);
  EXPECT_LT(max_abs(matmul_nt(a, transpose(b)) - naive_product(a, b)), 1e-12);
}

TEST(MatrixTest, ShapeMismatchIsContractError) {
  EXPECT_THROW(matmul(Matrix(2, 3), Matrix(2, 3)), ContractError);
  Matrix a(2, 2);
  EXPECT_THROW(a += Matrix(3, 2), ContractError);
}

TEST(MatrixTest, HadamardAndNorms) {
  const Matrix a = {{1, 2}, {3, 4}};
  EXPECT_EQ(hadamard(a, a), Matrix({{1, 4}, {9, 16}}));
  EXPECT_DOUBLE_EQ(squared_norm(a), 30.0);
  EXPECT_DOUBLE_EQ(frobenius_norm(a), std::sqrt(30.0));
  EXPECT_DOUBLE_EQ(max_abs(a), 4.0);
}

TEST(ActivationTest, SoftmaxRowsSumToOne) {
  Matrix m = random_matrix(20, 7, 4);
  m(3, 2) = 700.0;  // large logits must not overflow
  m(5, 0) = -700.0;
  const Matrix s = row_softmax(m);
  for (std::size_t i = 0; i < s.rows(); ++i) {
    double sum = 0.0;
    for (double v : s.row(i)) sum += v;
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(ActivationTest, NonFiniteInputIsRejected) {
  Matrix m(1, 2);
  m(0, 1) = std::nan("");
  EXPECT_THROW(row_softmax(m), NumericDomainError);
  EXPECT_THROW(relu(m), NumericDomainError);
}

TEST(ActivationTest, ReluAndSigmoid) {
  EXPECT_EQ(relu(Matrix({{-1, 0, 2}})), Matrix({{0, 0, 2}}));
  EXPECT_DOUBLE_EQ(sigmoid(0.0), 0.5);
  EXPECT_NEAR(sigmoid(1.0), 1.0 / (1.0 + std::exp(-1.0)), 1e-15);
}

TEST(SvdTest, IdentityHasUnitSingularValues) {
  const SvdResult r = svd(Matrix::identity(2));
  ASSERT_EQ(r.singular_values.size(), 2u);
  EXPECT_NEAR(r.singular_values[0], 1.0, 1e-14);
  EXPECT_NEAR(r.singular_values[1], 1.0, 1e-14);
}

TEST(SvdTest, DiagonalInput) {
  const SvdResult r = svd(Matrix({{3, 0}, {0, 0}}));
  EXPECT_NEAR(r.singular_values[0], 3.0, 1e-14);
  EXPECT_NEAR(r.singular_values[1], 0.0, 1e-14);
}

Matrix reconstruct(const SvdResult& r) {
  Matrix us = r.u;
  for (std::size_t i = 0; i < us.rows(); ++i) {
    for (std::size_t k = 0; k < us.cols(); ++k) us(i, k) *= r.singular_values[k];
  }
  return matmul_nt(us, r.v);
}

TEST(SvdTest, ReconstructsRandomMatrices) {
  const std::size_t shapes[][2] = {{5, 3}, {3, 5}, {1, 4}, {16, 16}, {64, 64}, {40, 9}};
  std::uint64_t seed = 10;
  for (const auto& s : shapes) {
    const Matrix m = random_matrix(s[0], s[1], ++seed);
    const SvdResult r = svd(m);
    EXPECT_LT(frobenius_norm(reconstruct(r) - m) / frobenius_norm(m), 1e-8)
        << s[0] << "x" << s[1];
    for (std::size_t k = 1; k < r.singular_values.size(); ++k) {
      EXPECT_GE(r.singular_values[k - 1], r.singular_values[k]);
    }
    const Matrix utu = matmul_tn(r.u, r.u);
    EXPECT_LT(max_abs(utu - Matrix::identity(utu.rows())), 1e-10);
  }
}

TEST(PseudoinverseTest, SimpleCases) {
  EXPECT_LT(max_abs(pseudoinverse(Matrix::identity(3)) - Matrix::identity(3)), 1e-14);
  EXPECT_NEAR(pseudoinverse(Matrix({{2}}))(0, 0), 0.5, 1e-15);
  EXPECT_EQ(pseudoinverse(Matrix(2, 3)), Matrix(3, 2));
}

TEST(PseudoinverseTest, PenroseConditionsOnRankDeficientInputs) {
  const Matrix v = random_matrix(3, 1, 21);
  const Matrix rank1 = matmul_nt(v, v);
  const Matrix low_rank = matmul(random_matrix(6, 2, 22), random_matrix(2, 5, 23));
  for (const Matrix& m : {rank1, low_rank, random_matrix(4, 7, 24)}) {
    const Matrix p = pseudoinverse(m);
    EXPECT_LT(max_abs(matmul(matmul(m, p), m) - m), 1e-8);
    EXPECT_LT(max_abs(matmul(matmul(p, m), p) - p), 1e-8);
  }
}

TEST(SymmetricEigenTest, ReconstructsAndSortsByMagnitude) {
  const Matrix b = random_matrix(6, 6, 31);
  const Matrix m = b + transpose(b);
  const SymmetricEigen e = symmetric_eigen(m);
  Matrix vl = e.vectors;
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t k = 0; k < 6; ++k) vl(i, k) *= e.values[k];
  }
  EXPECT_LT(max_abs(matmul_nt(vl, e.vectors) - m), 1e-10);
  for (std::size_t k = 1; k < 6; ++k) {
    EXPECT_GE(std::abs(e.values[k - 1]), std::abs(e.values[k]));
  }
}

TEST(AdamTest, ZeroGradientLeavesParameterAndStateUntouched) {
  Matrix p = {{1.5, -2.0}};
  AdamState s = AdamState::for_parameter(p);
  adam_step(p, Matrix({{0.3, -0.1}}), s);
  const Matrix before = p;
  const AdamState state_before = s;
  adam_step(p, Matrix(1, 2), s);
  EXPECT_EQ(p, before);
  EXPECT_EQ(s.step, state_before.step);
  EXPECT_EQ(s.first_moment, state_before.first_moment);
}

TEST(AdamTest, FirstStepMovesByLearningRate) {
  // At t = 1 the bias-corrected moments are g and g^2, so the step is
  // lr * g / (|g| + eps).
  Matrix p = {{0.0}};
  AdamState s = AdamState::for_parameter(p, AdamConfig{0.01});
  adam_step(p, Matrix({{1.0}}), s);
  EXPECT_NEAR(p(0, 0), -0.01 * 1.0 / (1.0 + 1e-8), 1e-15);
}

TEST(AdamTest, OppositeStepsAreBounded) {
  Matrix p = {{0.0}};
  AdamState s = AdamState::for_parameter(p, AdamConfig{0.01});
  adam_step(p, Matrix({{1.0}}), s);
  adam_step(p, Matrix({{-1.0}}), s);
  EXPECT_LT(std::abs(p(0, 0)), 2 * 0.01);
}

TEST(AdamTest, ShapeMismatchIsContractError) {
  Matrix p(2, 2);
  AdamState s = AdamState::for_parameter(p);
  EXPECT_THROW(adam_step(p, Matrix(1, 2), s), ContractError);
}

TEST(FiniteDifferenceTest, SquareAndConstant) {
  auto square = [](const Matrix& m) { return squared_norm(m); };
  EXPECT_NEAR(finite_diff_gradient(square, Matrix({{3}}), 1e-5)(0, 0), 6.0, 1e-8);
  auto constant = [](const Matrix&) { return 4.0; };
  EXPECT_EQ(finite_diff_gradient(constant, Matrix(2, 2), 1e-5), Matrix(2, 2));
}

TEST(RandomTest, DerivedSeedsAreStableAndDistinct) {
  static_assert(derive_seed(1, "a") == derive_seed(1, "a"));
  EXPECT_NE(derive_seed(1, "a"), derive_seed(1, "b"));
  EXPECT_NE(derive_seed(1, "a"), derive_seed(2, "a"));
  EXPECT_NE(derive_seed(1, "a", 0), derive_seed(1, "a", 1));
}

}  // namespace
}  // namespace pagcn
