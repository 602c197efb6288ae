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

#include "pagcn/alignment_terms.hpp"

#include <optional>

#include "pagcn/errors.hpp"
#include "pagcn/numerics.hpp"

namespace pagcn {
namespace {

void check_alignment(const Matrix& ua, const Matrix& ub, const Alignment& alignment) {
  if (alignment.n_a != ua.rows() || alignment.n_b != ub.rows()) {
    throw ContractError("alignment is " + std::to_string(alignment.n_a) + "x" +
                        std::to_string(alignment.n_b) + " but representations have " +
                        std::to_string(ua.rows()) + " and " +
                        std::to_string(ub.rows()) + " rows");
  }
}

// Residual E = (U_A R or U_A) - A_AB U_B restricted to the scoped rows.
Matrix residual(const Matrix& ua_mapped, const Matrix& ub, const Alignment& alignment,
                RowScope scope) {
  Matrix aligned_b(ua_mapped.rows(), ub.cols());
  std::vector<bool> has_partner(ua_mapped.rows(), false);
  for (const AlignedPair& p : alignment.pairs) {
    if (p.label != 1) continue;
    has_partner[p.a] = true;
    auto dst = aligned_b.row(p.a);
    auto src = ub.row(p.b);
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
  }
  Matrix e = ua_mapped;
  e -= aligned_b;
  if (scope == RowScope::kAlignedRows) {
    for (std::size_t i = 0; i < e.rows(); ++i) {
      if (has_partner[i]) continue;
      for (double& v : e.row(i)) v = 0.0;
    }
  }
  return e;
}

// dL/dU_B = -2 A_AB^T E.
Matrix residual_grad_b(const Matrix& e, const Matrix& ub, const Alignment& alignment) {
  Matrix g(ub.rows(), ub.cols());
  for (const AlignedPair& p : alignment.pairs) {
    if (p.label != 1) continue;
    auto dst = g.row(p.b);
    auto src = e.row(p.a);
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] -= 2.0 * src[k];
  }
  return g;
}

}  // namespace

double hard_reg(const Matrix& ua, const Matrix& ub, const Alignment& alignment,
                RowScope scope) {
  check_alignment(ua, ub, alignment);
  if (ua.cols() != ub.cols()) {
    throw ConfigError("hard regularization requires d_A == d_B (got " +
                      std::to_string(ua.cols()) + " and " + std::to_string(ub.cols()) + ")");
  }
  return squared_norm(residual(ua, ub, alignment, scope));
}

AlignmentTermValue hard_reg_with_gradient(const Matrix& ua, const Matrix& ub,
                                          const Alignment& alignment, RowScope scope) {
  check_alignment(ua, ub, alignment);
  if (ua.cols() != ub.cols()) {
    throw ConfigError("hard regularization requires d_A == d_B");
  }
  const Matrix e = residual(ua, ub, alignment, scope);
  return {squared_norm(e), 2.0 * e, residual_grad_b(e, ub, alignment), Matrix()};
}

double soft_reg(const Matrix& ua, const Matrix& ub, const Matrix& r,
                const Alignment& alignment, RowScope scope) {
  check_alignment(ua, ub, alignment);
  if (r.rows() != ua.cols() || r.cols() != ub.cols()) {
    throw ContractError("soft regularization: R is " + r.shape_string() +
                        ", expected " + std::to_string(ua.cols()) + "x" +
                        std::to_string(ub.cols()));
  }
  return squared_norm(residual(matmul(ua, r), ub, alignment, scope));
}

AlignmentTermValue soft_reg_with_gradient(const Matrix& ua, const Matrix& ub,
                                          const Matrix& r, const Alignment& alignment,
                                          RowScope scope) {
  check_alignment(ua, ub, alignment);
  if (r.rows() != ua.cols() || r.cols() != ub.cols()) {
    throw ContractError("soft regularization: R shape mismatch");
  }
  const Matrix e = residual(matmul(ua, r), ub, alignment, scope);
  AlignmentTermValue out;
  out.loss = squared_norm(e);
  out.grad_a = 2.0 * matmul_nt(e, r);
  out.grad_b = residual_grad_b(e, ub, alignment);
  out.grad_r = 2.0 * matmul_tn(ua, e);
  return out;
}

double align_recon_loss(const Matrix& ua, const Matrix& ub, const Matrix& r,
                        const Alignment& alignment) {
  check_alignment(ua, ub, alignment);
  if (r.rows() != ua.cols() || r.cols() != ub.cols()) {
    throw ContractError("alignment reconstruction: R shape mismatch");
  }
  const Matrix ub_rt = matmul_nt(ub, r);  // row b holds R u_b
  double loss = 0.0;
  for (const AlignedPair& p : alignment.pairs) {
    const double diff = sigmoid(dot(ua.row(p.a), ub_rt.row(p.b))) - p.label;
    loss += diff * diff;
  }
  return loss;
}

AlignmentTermValue align_recon_with_gradient(const Matrix& ua, const Matrix& ub,
                                             const Matrix& r,
                                             const Alignment& alignment) {
  check_alignment(ua, ub, alignment);
  if (r.rows() != ua.cols() || r.cols() != ub.cols()) {
    throw ContractError("alignment reconstruction: R shape mismatch");
  }
  const Matrix ub_rt = matmul_nt(ub, r);
  const Matrix ua_r = matmul(ua, r);  // row a holds R^T u_a
  AlignmentTermValue out{0.0, Matrix(ua.rows(), ua.cols()), Matrix(ub.rows(), ub.cols()),
                         Matrix(r.rows(), r.cols())};
  for (const AlignedPair& p : alignment.pairs) {
    auto u_a = ua.row(p.a);
    auto u_b = ub.row(p.b);
    const double s = sigmoid(dot(u_a, ub_rt.row(p.b)));
    const double diff = s - p.label;
    out.loss += diff * diff;
    const double g = 2.0 * diff * s * (1.0 - s);
    auto ga = out.grad_a.row(p.a);
    auto rb = ub_rt.row(p.b);
    for (std::size_t k = 0; k < ga.size(); ++k) ga[k] += g * rb[k];
    auto gb = out.grad_b.row(p.b);
    auto ra = ua_r.row(p.a);
    for (std::size_t k = 0; k < gb.size(); ++k) gb[k] += g * ra[k];
    for (std::size_t x = 0; x < r.rows(); ++x) {
      const double gx = g * u_a[x];
      if (gx == 0.0) continue;
      for (std::size_t y = 0; y < r.cols(); ++y) out.grad_r(x, y) += gx * u_b[y];
    }
  }
  return out;
}

}  // namespace pagcn
