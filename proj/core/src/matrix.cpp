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

#include "pagcn/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "pagcn/errors.hpp"

namespace pagcn {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows * cols) {
    throw ContractError("matrix value count " + std::to_string(values_.size()) +
                        " does not match shape " + shape_string());
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  values_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ContractError("ragged matrix literal");
    values_.insert(values_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::string Matrix::shape_string() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

void Matrix::fill(double value) { std::fill(values_.begin(), values_.end(), value); }

Matrix& Matrix::operator+=(const Matrix& other) {
  require_same_shape(*this, other, "matrix +=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require_same_shape(*this, other, "matrix -=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Matrix& Matrix::operator*=(double scale) {
  for (double& v : values_) v *= scale;
  return *this;
}

Matrix& Matrix::add_scaled(const Matrix& other, double scale) {
  require_same_shape(*this, other, "matrix add_scaled");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    values_[i] += scale * other.values_[i];
  }
  return *this;
}

Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
Matrix operator*(Matrix lhs, double scale) { return lhs *= scale; }
Matrix operator*(double scale, Matrix rhs) { return rhs *= scale; }

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (!a.same_shape(b)) {
    throw ContractError(std::string(what) + ": shape mismatch " +
                        a.shape_string() + " vs " + b.shape_string());
  }
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ContractError("matmul: inner dimensions differ " + a.shape_string() +
                        " * " + b.shape_string());
  }
  Matrix c(a.rows(), b.cols());
  const std::size_t n = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* out = c.values().data() + i * n;
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const double* brow = b.values().data() + k * n;
      for (std::size_t j = 0; j < n; ++j) out[j] += aik * brow[j];
    }
  }
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw ContractError("matmul_tn: row counts differ " + a.shape_string() +
                        " vs " + b.shape_string());
  }
  Matrix c(a.cols(), b.cols());
  const std::size_t n = b.cols();
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const double* brow = b.values().data() + k * n;
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double aki = a(k, i);
      if (aki == 0.0) continue;
      double* out = c.values().data() + i * n;
      for (std::size_t j = 0; j < n; ++j) out[j] += aki * brow[j];
    }
  }
  return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw ContractError("matmul_nt: column counts differ " + a.shape_string() +
                        " vs " + b.shape_string());
  }
  Matrix c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.rows(); ++j) c(i, j) = dot(a.row(i), b.row(j));
  }
  return c;
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  }
  return t;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "hadamard");
  Matrix c = a;
  auto out = c.values();
  auto rhs = b.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= rhs[i];
  return c;
}

Matrix diagonal(std::span<const double> entries) {
  Matrix m(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_norm(const Matrix& m) { return dot(m.values(), m.values()); }

double frobenius_norm(const Matrix& m) { return std::sqrt(squared_norm(m)); }

double max_abs(const Matrix& m) {
  double best = 0.0;
  for (double v : m.values()) best = std::max(best, std::abs(v));
  return best;
}

bool all_finite(const Matrix& m) {
  return std::all_of(m.values().begin(), m.values().end(),
                     [](double v) { return std::isfinite(v); });
}

}  // namespace pagcn
