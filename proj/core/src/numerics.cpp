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

#include "pagcn/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "pagcn/errors.hpp"

namespace pagcn {
namespace {

void require_finite(const Matrix& m, const char* what) {
  if (!all_finite(m)) {
    throw NumericDomainError(std::string(what) + ": non-finite input");
  }
}

using EigenMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const EigenMatrix> as_eigen(const Matrix& m) {
  return {m.values().data(), static_cast<Eigen::Index>(m.rows()),
          static_cast<Eigen::Index>(m.cols())};
}

template <typename Derived>
Matrix from_eigen(const Eigen::MatrixBase<Derived>& e) {
  Matrix out(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
  for (Eigen::Index i = 0; i < e.rows(); ++i) {
    for (Eigen::Index j = 0; j < e.cols(); ++j) out(i, j) = e(i, j);
  }
  return out;
}

}  // namespace

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Matrix relu(const Matrix& m) {
  require_finite(m, "relu");
  Matrix out = m;
  for (double& v : out.values()) v = v > 0.0 ? v : 0.0;
  return out;
}

Matrix sigmoid(const Matrix& m) {
  require_finite(m, "sigmoid");
  Matrix out = m;
  for (double& v : out.values()) v = sigmoid(v);
  return out;
}

Matrix row_softmax(const Matrix& m) {
  require_finite(m, "row_softmax");
  Matrix out = m;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto row = out.row(i);
    if (row.empty()) continue;
    const double peak = *std::max_element(row.begin(), row.end());
    double total = 0.0;
    for (double& v : row) {
      v = std::exp(v - peak);
      total += v;
    }
    for (double& v : row) v /= total;
  }
  return out;
}

Matrix activate(const Matrix& m, Activation kind) {
  switch (kind) {
    case Activation::kRelu:
      return relu(m);
    case Activation::kSigmoid:
      return sigmoid(m);
    case Activation::kRowSoftmax:
      return row_softmax(m);
  }
  throw ContractError("unknown activation");
}

SvdResult svd(const Matrix& m) {
  require_finite(m, "svd");
  if (m.rows() == 0 || m.cols() == 0) {
    const std::size_t k = std::min(m.rows(), m.cols());
    return SvdResult{Matrix(m.rows(), k), {}, Matrix(m.cols(), k)};
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> d(as_eigen(m),
                                            Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = d.singularValues();
  return SvdResult{from_eigen(d.matrixU()), std::vector<double>(s.data(), s.data() + s.size()),
                   from_eigen(d.matrixV())};
}

Matrix pseudoinverse(const Matrix& m, double tol) {
  if (tol < 0.0) throw ContractError("pseudoinverse: tol must be >= 0");
  const SvdResult d = svd(m);
  Matrix out(m.cols(), m.rows());
  if (d.singular_values.empty()) return out;
  const double cutoff = tol * d.singular_values.front();
  for (std::size_t k = 0; k < d.singular_values.size(); ++k) {
    const double s = d.singular_values[k];
    if (s <= cutoff || s == 0.0) continue;
    const double inv = 1.0 / s;
    for (std::size_t i = 0; i < m.cols(); ++i) {
      const double vik = d.v(i, k) * inv;
      if (vik == 0.0) continue;
      for (std::size_t j = 0; j < m.rows(); ++j) out(i, j) += vik * d.u(j, k);
    }
  }
  return out;
}

SymmetricEigen symmetric_eigen(const Matrix& m) {
  if (m.rows() != m.cols()) throw ContractError("symmetric_eigen: not square");
  require_finite(m, "symmetric_eigen");
  const std::size_t n = m.rows();
  if (n == 0) return SymmetricEigen{{}, Matrix(0, 0)};
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(as_eigen(m));
  if (solver.info() != Eigen::Success) {
    throw NumericDomainError("symmetric_eigen: no convergence");
  }
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return std::abs(values(x)) > std::abs(values(y));
  });
  SymmetricEigen out{std::vector<double>(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = values(order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = vectors(i, order[k]);
  }
  return out;
}

AdamState AdamState::for_parameter(const Matrix& param, AdamConfig config) {
  if (!(config.learning_rate > 0.0)) {
    throw ContractError("adam: learning rate must be positive");
  }
  return AdamState{Matrix(param.rows(), param.cols()),
                   Matrix(param.rows(), param.cols()), 0, config};
}

void adam_step(Matrix& param, const Matrix& grad, AdamState& state) {
  require_same_shape(param, grad, "adam_step gradient");
  require_same_shape(param, state.first_moment, "adam_step first moment");
  require_same_shape(param, state.second_moment, "adam_step second moment");
  const auto g = grad.values();
  if (std::all_of(g.begin(), g.end(), [](double x) { return x == 0.0; })) return;

  const AdamConfig& cfg = state.config;
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double bias1 = 1.0 - std::pow(cfg.beta1, t);
  const double bias2 = 1.0 - std::pow(cfg.beta2, t);
  auto p = param.values();
  auto m = state.first_moment.values();
  auto v = state.second_moment.values();
  for (std::size_t i = 0; i < p.size(); ++i) {
    m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
    v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
    const double m_hat = m[i] / bias1;
    const double v_hat = v[i] / bias2;
    p[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
  }
}

Matrix finite_diff_gradient(const ScalarFunction& loss_fn, const Matrix& at,
                            double h) {
  if (!(h > 0.0)) throw ContractError("finite_diff_gradient: h must be > 0");
  Matrix probe = at;
  Matrix grad(at.rows(), at.cols());
  auto x = probe.values();
  auto out = grad.values();
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double saved = x[k];
    x[k] = saved + h;
    const double up = loss_fn(probe);
    x[k] = saved - h;
    const double down = loss_fn(probe);
    x[k] = saved;
    out[k] = (up - down) / (2.0 * h);
  }
  return grad;
}

double relative_error(const Matrix& analytic, const Matrix& reference) {
  require_same_shape(analytic, reference, "relative_error");
  const double scale =
      std::max({frobenius_norm(analytic), frobenius_norm(reference), 1e-8});
  return frobenius_norm(analytic - reference) / scale;
}

}  // namespace pagcn
