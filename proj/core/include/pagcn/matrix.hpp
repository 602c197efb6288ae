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

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace pagcn {

// Dense row-major real matrix with value semantics.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  double& operator()(std::size_t r, std::size_t c) {
    return values_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return values_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) {
    return {values_.data() + r * cols_, cols_};
  }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  bool same_shape(const Matrix& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  std::string shape_string() const;

  void fill(double value);

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double scale);
  // this += scale * other
  Matrix& add_scaled(const Matrix& other, double scale);

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator*(Matrix lhs, double scale);
Matrix operator*(double scale, Matrix rhs);

// a * b
Matrix matmul(const Matrix& a, const Matrix& b);
// a^T * b
Matrix matmul_tn(const Matrix& a, const Matrix& b);
// a * b^T
Matrix matmul_nt(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& m);
Matrix hadamard(const Matrix& a, const Matrix& b);
Matrix diagonal(std::span<const double> entries);

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(const Matrix& m);
double frobenius_norm(const Matrix& m);
double max_abs(const Matrix& m);
bool all_finite(const Matrix& m);

// Throws ContractError naming `what` when shapes differ.
void require_same_shape(const Matrix& a, const Matrix& b, const char* what);

}  // namespace pagcn
