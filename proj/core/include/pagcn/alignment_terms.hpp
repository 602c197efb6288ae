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

#include "pagcn/graph.hpp"
#include "pagcn/matrix.hpp"

namespace pagcn {

// Which rows of U_A the hard/soft penalties cover. The Frobenius form over
// all rows pulls unaligned rows of U_A toward zero; kAlignedRows restricts
// it to rows with at least one aligned partner.
enum class RowScope { kAlignedRows, kAllRows };

struct AlignmentTermValue {
  double loss = 0.0;
  Matrix grad_a;  // dL/dU_A
  Matrix grad_b;  // dL/dU_B
  Matrix grad_r;  // dL/dR, empty for the hard penalty
};

// ||U_A - A_AB U_B||_F^2 over the scoped rows. Requires d_A == d_B.
double hard_reg(const Matrix& ua, const Matrix& ub, const Alignment& alignment,
                RowScope scope = RowScope::kAlignedRows);
AlignmentTermValue hard_reg_with_gradient(const Matrix& ua, const Matrix& ub,
                                          const Alignment& alignment,
                                          RowScope scope = RowScope::kAlignedRows);

// ||U_A R - A_AB U_B||_F^2 over the scoped rows, R is d_A x d_B.
double soft_reg(const Matrix& ua, const Matrix& ub, const Matrix& r,
                const Alignment& alignment, RowScope scope = RowScope::kAlignedRows);
AlignmentTermValue soft_reg_with_gradient(const Matrix& ua, const Matrix& ub,
                                          const Matrix& r, const Alignment& alignment,
                                          RowScope scope = RowScope::kAlignedRows);

// sum over observed entries (a, b, label) of (sigma(u_a^T R u_b) - label)^2.
double align_recon_loss(const Matrix& ua, const Matrix& ub, const Matrix& r,
                        const Alignment& alignment);
AlignmentTermValue align_recon_with_gradient(const Matrix& ua, const Matrix& ub,
                                             const Matrix& r,
                                             const Alignment& alignment);

}  // namespace pagcn
