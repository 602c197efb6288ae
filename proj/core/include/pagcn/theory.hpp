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
#include <span>
#include <string>
#include <vector>

#include "pagcn/matrix.hpp"

namespace pagcn {

inline constexpr double kDefaultRankEpsilon = 1e-9;

// Low-rank factor of a symmetric matrix A = U_hat diag(sign * sigma) U_hat^T.
// sqrt_sigma holds sqrt(|lambda|) for the eigenvalues with
// |lambda| >= eps_rank * |lambda|_max; signs are negative for negative
// eigenvalues, so target() * target()^T reproduces A only when A is PSD.
struct LinearTarget {
  Matrix u_hat;                    // n x rank, orthonormal columns
  std::vector<double> sqrt_sigma;  // rank entries, non-increasing
  std::vector<int> signs;
  std::size_t rank = 0;
  double eps_rank = kDefaultRankEpsilon;

  Matrix target() const;  // U_hat sqrt(Sigma), n x rank
};

LinearTarget linear_target(const Matrix& a, double eps_rank = kDefaultRankEpsilon);

// A_hat^2 X, the design matrix of the linear two-layer GCN.
Matrix linear_design(const Matrix& a_hat, const Matrix& x);

// (X^T A_hat^4 X)^+ X^T A_hat^2 U_hat sqrt(Sigma).
Matrix closed_form_theta(const Matrix& a_hat, const Matrix& x, const LinearTarget& target);

// ||A_hat^2 X Theta - U_hat sqrt(Sigma)||_F^2 and its gradient in Theta.
double linear_loss(const Matrix& a_hat, const Matrix& x, const Matrix& theta,
                   const LinearTarget& target);
Matrix linear_loss_gradient(const Matrix& a_hat, const Matrix& x, const Matrix& theta,
                            const LinearTarget& target);

struct LinearFit {
  Matrix theta;
  double loss = 0.0;
  std::size_t iterations = 0;
};

// Plain gradient descent from Theta = 0 with step 1 / L, L the gradient's
// Lipschitz constant. Stops when the loss improves by less than
// `tolerance` relative over a full check interval.
LinearFit train_linear_gd(const Matrix& a_hat, const Matrix& x, const LinearTarget& target,
                          std::size_t max_iterations = 200000, double tolerance = 1e-13);

// One graph of the linear setting.
struct LinearGraph {
  Matrix adjacency;
  Matrix a_hat;
  Matrix x;
  LinearTarget target;
};

// Erdos-Renyi graph with Gaussian features; A_hat uses the default
// normalization.
LinearGraph random_linear_graph(std::size_t n, std::size_t m, double edge_probability,
                                std::uint64_t seed);

enum class SharedFactor { kW2, kW1W2 };

struct NoTransferOptions {
  std::size_t adam_epochs = 1000;
  double learning_rate = 0.01;
  std::size_t max_sweeps = 20000;
  double tolerance = 1e-14;  // relative loss change that ends the polish
};

struct NoTransferReport {
  double joint_loss = 0.0;        // trained shared-parameter model
  double independent_loss = 0.0;  // sum of per-graph closed-form optima
  double absolute_gap = 0.0;
  double relative_gap = 0.0;
  std::size_t total_rank = 0;
  std::size_t d = 0;
  bool diverged = false;
};

// Trains Theta_i = W1_i W2 B_i (shared W2) or Theta_i = W1 W2 B_i (shared
// W1 and W2) jointly: Adam on all factors, then alternating least squares
// on the factors until the loss settles.
NoTransferReport no_transfer_experiment(const std::vector<LinearGraph>& graphs,
                                        std::size_t d, SharedFactor shared,
                                        std::uint64_t seed,
                                        const NoTransferOptions& options = {});

// Block-coordinate view of the two-graph linear objective with alignment.
struct FixedPointProblem {
  Matrix target_a;  // U_hat_A sqrt(Sigma_A), n_A x d_A
  Matrix target_b;  // n_B x d_B
  Matrix align;     // A^{A,B}, n_A x n_B
  Matrix r;         // d_A x d_B
  Matrix u_b;       // the representation of graph B held fixed
  double alpha_a = 0.5;
  double alpha_b = 0.5;
  double beta = 0.5;
};

struct FixedPointReport {
  Matrix closed_form;                // U_A* given u_b
  double gradient_norm = 0.0;        // appendix gradient at U_A*
  double block_distance = 0.0;       // descent on U_A alone vs U_A*
  double alternating_distance = 0.0; // alternating descent on (U_A, U_B)
  std::size_t iterations = 0;
  bool converged = false;
};

// ((1-b) a T_A + b A U_B R^T) ((1-b) a I + b R R^T)^{-1}.
Matrix soft_reg_closed_form(const FixedPointProblem& p);
// 2 (1-b) a (U_A - T_A) + 2 b (U_A R - A U_B) R^T.
Matrix soft_reg_gradient(const FixedPointProblem& p, const Matrix& u_a, const Matrix& u_b);
double soft_reg_objective(const FixedPointProblem& p, const Matrix& u_a, const Matrix& u_b);

// ((1-b) a T_A + b A U_B R^T) ((1-b) a I + b R U_B^T U_B R^T)^{-1}.
Matrix recon_closed_form(const FixedPointProblem& p);
// 2 (1-b) a (U_A - T_A) + 2 b (U_A R U_B^T - A) U_B R^T.
Matrix recon_gradient(const FixedPointProblem& p, const Matrix& u_a, const Matrix& u_b);
double recon_objective(const FixedPointProblem& p, const Matrix& u_a, const Matrix& u_b);

FixedPointReport soft_reg_fixed_point(const FixedPointProblem& p);
FixedPointReport recon_fixed_point(const FixedPointProblem& p);

// Targets from random rank-d PSD matrices, a partial one-to-one alignment
// and random R, U_B, alpha and beta in (0, 1).
FixedPointProblem random_fixed_point_problem(std::size_t n_a, std::size_t n_b,
                                             std::size_t d_a, std::size_t d_b,
                                             std::uint64_t seed);

struct PositiveTransferOptions {
  std::vector<std::size_t> sizes = {20, 40, 80, 160, 320};
  std::vector<double> angles = {0.0, 0.5235987755982988, 1.5707963267948966};
  std::size_t seeds = 10;
  std::size_t m = 5;
  double noise = 0.02;
  // Constant c of the sample-size condition. c = 1 satisfies
  // c >= sin(theta_A, theta_B) / kappa for every pair of tasks.
  double regime_c = 1.0;
  double mean_degree = 5.0;
  std::size_t steps = 1500;
  double learning_rate = 0.01;
};

struct PositiveTransferRow {
  double angle = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double sin_between = 0.0;  // sin(theta_A, theta_B)
  double sin_error = 0.0;    // sin(W*, theta_A)
  double kappa_b = 0.0;      // condition number of A_hat_B X_B
  double required_n = 0.0;   // sample-size condition at regime_c
  bool in_regime = false;    // n >= required_n
};

// max(m log m / c^2 (1 / c^2 + log m), ||y_B||^2 / c^2).
double required_samples(std::size_t m, double c, double y_b_squared_norm);

// Planted one-layer ReLU model y_i = ReLU(A_hat_i X_i theta_i) + noise,
// n_A = n_B = n; a single shared w (d = 1) is fitted to both graphs.
PositiveTransferRow positive_transfer_run(std::size_t m, std::size_t n, double angle,
                                          std::uint64_t seed,
                                          const PositiveTransferOptions& options = {});
std::vector<PositiveTransferRow> positive_transfer_experiment(
    std::uint64_t seed, const PositiveTransferOptions& options = {});

// sin of the angle between two vectors.
double sine_between(std::span<const double> a, std::span<const double> b);

struct TheoryCheck {
  std::string check_name;
  std::string expected;
  double observed = 0.0;
  bool pass = false;
};

// The closed-form, no-transfer, fixed-point and positive-transfer checks.
std::vector<TheoryCheck> run_theory_checks(std::uint64_t seed);

}  // namespace pagcn
