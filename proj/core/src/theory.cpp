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

#include "pagcn/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "pagcn/errors.hpp"
#include "pagcn/gcn.hpp"
#include "pagcn/graph.hpp"
#include "pagcn/numerics.hpp"
#include "pagcn/random.hpp"

namespace pagcn {
namespace {

Matrix gaussian(std::size_t rows, std::size_t cols, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix m(rows, cols);
  for (double& v : m.values()) v = normal(rng);
  return m;
}

Matrix random_adjacency(std::size_t n, double p, Rng& rng) {
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (uniform_real(rng, 0.0, 1.0) < p) {
        a(i, j) = 1.0;
        a(j, i) = 1.0;
      }
    }
  }
  return a;
}

double spectral_norm(const Matrix& m) {
  const SvdResult s = svd(m);
  return s.singular_values.empty() ? 0.0 : s.singular_values.front();
}

// B * M^{-1} for a small square M; singular systems are reported.
Matrix solve_right(const Matrix& b, const Matrix& m, const std::string& what) {
  const SvdResult s = svd(m);
  const double smax = s.singular_values.front();
  const double smin = s.singular_values.back();
  if (!(smin > 1e-12 * smax) || smax == 0.0) {
    std::ostringstream msg;
    msg << what << " is singular (condition " << (smin > 0.0 ? smax / smin : INFINITY)
        << ")";
    throw NumericDomainError(msg.str());
  }
  return matmul(b, pseudoinverse(m, 0.0));
}

double relative_distance(const Matrix& a, const Matrix& b) {
  return frobenius_norm(a - b) / std::max(frobenius_norm(b), 1e-300);
}

using GradientFn = std::function<Matrix(const Matrix& u_a, const Matrix& u_b)>;

// Gradient descent on one block with a fixed step until the gradient is
// negligible.
std::size_t descend(Matrix& block, const std::function<Matrix(const Matrix&)>& grad,
                    double lipschitz, std::size_t max_iterations, double grad_tol) {
  const double step = 1.0 / lipschitz;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    const Matrix g = grad(block);
    if (frobenius_norm(g) <= grad_tol) return it;
    block.add_scaled(g, -step);
  }
  return max_iterations;
}

struct BlockOps {
  GradientFn grad_a;
  GradientFn grad_b;
  std::function<double(const Matrix& u_b)> lipschitz_a;
  std::function<double(const Matrix& u_a)> lipschitz_b;
  std::function<Matrix(const Matrix& u_b)> closed_form_a;
};

FixedPointReport fixed_point_report(const FixedPointProblem& p, const BlockOps& ops) {
  constexpr double kGradTol = 1e-12;
  constexpr std::size_t kMaxIterations = 200000;
  FixedPointReport rep;
  rep.closed_form = ops.closed_form_a(p.u_b);
  rep.gradient_norm = frobenius_norm(ops.grad_a(rep.closed_form, p.u_b));

  // Descent on U_A alone, starting from the graph-only optimum.
  Matrix u_a = p.target_a;
  const std::size_t block_iterations =
      descend(u_a, [&](const Matrix& x) { return ops.grad_a(x, p.u_b); },
              ops.lipschitz_a(p.u_b), kMaxIterations, kGradTol);
  rep.block_distance = relative_distance(u_a, rep.closed_form);

  // Alternating descent on both blocks; at convergence U_A must equal the
  // closed form evaluated at the final U_B.
  Matrix a = p.target_a;
  Matrix b = p.u_b;
  bool converged = false;
  std::size_t sweeps = 0;
  for (; sweeps < 2000 && !converged; ++sweeps) {
    descend(a, [&](const Matrix& x) { return ops.grad_a(x, b); }, ops.lipschitz_a(b), 2000,
            kGradTol);
    descend(b, [&](const Matrix& x) { return ops.grad_b(a, x); }, ops.lipschitz_b(a), 2000,
            kGradTol);
    converged = frobenius_norm(ops.grad_a(a, b)) <= 1e-10 &&
                frobenius_norm(ops.grad_b(a, b)) <= 1e-10;
  }
  rep.alternating_distance = relative_distance(a, ops.closed_form_a(b));
  rep.iterations = block_iterations + sweeps;
  rep.converged = converged && block_iterations < kMaxIterations;
  return rep;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string format_expected(const char* op, double value) {
  std::ostringstream s;
  s << op << " " << value;
  return s.str();
}

}  // namespace

Matrix LinearTarget::target() const {
  Matrix t = u_hat;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t k = 0; k < rank; ++k) t(i, k) *= sqrt_sigma[k];
  }
  return t;
}

LinearTarget linear_target(const Matrix& a, double eps_rank) {
  if (a.rows() != a.cols()) throw ContractError("linear_target needs a square matrix");
  const SymmetricEigen eig = symmetric_eigen(a);
  LinearTarget t;
  t.eps_rank = eps_rank;
  const double top = eig.values.empty() ? 0.0 : std::abs(eig.values.front());
  for (double lambda : eig.values) {
    if (top > 0.0 && std::abs(lambda) >= eps_rank * top) ++t.rank;
  }
  t.u_hat = Matrix(a.rows(), t.rank);
  for (std::size_t k = 0; k < t.rank; ++k) {
    const double lambda = eig.values[k];
    t.sqrt_sigma.push_back(std::sqrt(std::abs(lambda)));
    t.signs.push_back(lambda < 0.0 ? -1 : 1);
    for (std::size_t i = 0; i < a.rows(); ++i) t.u_hat(i, k) = eig.vectors(i, k);
  }
  return t;
}

Matrix linear_design(const Matrix& a_hat, const Matrix& x) {
  return matmul(a_hat, matmul(a_hat, x));
}

Matrix closed_form_theta(const Matrix& a_hat, const Matrix& x, const LinearTarget& target) {
  const Matrix a2 = matmul(a_hat, a_hat);
  const Matrix a4 = matmul(a2, a2);
  const Matrix gram = matmul_tn(x, matmul(a4, x));
  const Matrix rhs = matmul_tn(x, matmul(a2, target.target()));
  return matmul(pseudoinverse(gram), rhs);
}

double linear_loss(const Matrix& a_hat, const Matrix& x, const Matrix& theta,
                   const LinearTarget& target) {
  return squared_norm(matmul(linear_design(a_hat, x), theta) - target.target());
}

Matrix linear_loss_gradient(const Matrix& a_hat, const Matrix& x, const Matrix& theta,
                            const LinearTarget& target) {
  const Matrix m = linear_design(a_hat, x);
  return 2.0 * matmul_tn(m, matmul(m, theta) - target.target());
}

LinearFit train_linear_gd(const Matrix& a_hat, const Matrix& x, const LinearTarget& target,
                          std::size_t max_iterations, double tolerance) {
  constexpr std::size_t kCheckInterval = 1000;
  const Matrix m = linear_design(a_hat, x);
  const Matrix t = target.target();
  const Matrix gram = matmul_tn(m, m);
  const Matrix mt = matmul_tn(m, t);
  const double s = spectral_norm(m);
  LinearFit fit;
  fit.theta = Matrix(m.cols(), t.cols());
  if (s == 0.0) {
    fit.loss = squared_norm(t);
    return fit;
  }
  const double step = 1.0 / (2.0 * s * s);
  double last_checked = squared_norm(t);
  for (fit.iterations = 0; fit.iterations < max_iterations; ++fit.iterations) {
    // grad = 2 (M^T M Theta - M^T T)
    Matrix g = matmul(gram, fit.theta);
    g -= mt;
    fit.theta.add_scaled(g, -2.0 * step);
    if ((fit.iterations + 1) % kCheckInterval == 0) {
      const double loss = squared_norm(matmul(m, fit.theta) - t);
      if (last_checked - loss <= tolerance * std::max(loss, 1e-300)) break;
      last_checked = loss;
    }
  }
  fit.loss = squared_norm(matmul(m, fit.theta) - t);
  return fit;
}

LinearGraph random_linear_graph(std::size_t n, std::size_t m, double edge_probability,
                                std::uint64_t seed) {
  Rng rng(derive_seed(seed, "linear-graph"));
  LinearGraph g;
  g.adjacency = random_adjacency(n, edge_probability, rng);
  g.a_hat = normalize_adjacency(g.adjacency).matrix;
  g.x = gaussian(n, m, rng);
  g.target = linear_target(g.adjacency);
  return g;
}

NoTransferReport no_transfer_experiment(const std::vector<LinearGraph>& graphs,
                                        std::size_t d, SharedFactor shared,
                                        std::uint64_t seed,
                                        const NoTransferOptions& options) {
  if (graphs.empty()) throw ContractError("no_transfer_experiment needs at least one graph");
  if (d == 0) throw ConfigError("d must be >= 1");
  const std::size_t k = graphs.size();
  NoTransferReport rep;
  rep.d = d;
  std::vector<Matrix> design;
  std::vector<Matrix> targets;
  for (const LinearGraph& g : graphs) {
    design.push_back(linear_design(g.a_hat, g.x));
    targets.push_back(g.target.target());
    rep.total_rank += g.target.rank;
    rep.independent_loss +=
        linear_loss(g.a_hat, g.x, closed_form_theta(g.a_hat, g.x, g.target), g.target);
  }
  if (k == 1) {
    // Nothing is shared with a single graph.
    rep.joint_loss = rep.independent_loss;
    return rep;
  }
  if (shared == SharedFactor::kW1W2) {
    for (const Matrix& m : design) {
      if (m.cols() != design[0].cols()) {
        throw ConfigError("sharing W1 and W2 requires equal feature dimensions");
      }
    }
  }

  // Parameters: W1 (one per graph, or one shared), W2 shared, B per graph.
  std::vector<Matrix> w1;
  const std::size_t num_w1 = shared == SharedFactor::kW2 ? k : 1;
  for (std::size_t i = 0; i < num_w1; ++i) {
    w1.push_back(glorot_uniform(design[i].cols(), d, derive_seed(seed, "W1", i)));
  }
  Matrix w2 = glorot_uniform(d, d, derive_seed(seed, "W2"));
  std::vector<Matrix> b;
  for (std::size_t i = 0; i < k; ++i) {
    b.push_back(glorot_uniform(d, targets[i].cols(), derive_seed(seed, "B", i)));
  }
  auto w1_of = [&](std::size_t i) -> Matrix& { return w1[num_w1 == 1 ? 0 : i]; };

  auto total_loss = [&] {
    double loss = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      loss += squared_norm(matmul(design[i], matmul(matmul(w1_of(i), w2), b[i])) - targets[i]);
    }
    return loss;
  };

  std::vector<AdamState> w1_state;
  for (const Matrix& w : w1) w1_state.push_back(AdamState::for_parameter(w, {options.learning_rate}));
  AdamState w2_state = AdamState::for_parameter(w2, {options.learning_rate});
  std::vector<AdamState> b_state;
  for (const Matrix& bi : b) b_state.push_back(AdamState::for_parameter(bi, {options.learning_rate}));

  for (std::size_t epoch = 0; epoch < options.adam_epochs; ++epoch) {
    std::vector<Matrix> g1;
    for (const Matrix& w : w1) g1.emplace_back(w.rows(), w.cols());
    Matrix g2(d, d);
    std::vector<Matrix> gb;
    double loss = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const Matrix w12 = matmul(w1_of(i), w2);
      const Matrix e = matmul(design[i], matmul(w12, b[i])) - targets[i];
      loss += squared_norm(e);
      const Matrix g_theta = 2.0 * matmul_tn(design[i], e);  // m x r
      g1[num_w1 == 1 ? 0 : i] += matmul_nt(g_theta, matmul(w2, b[i]));
      g2 += matmul(matmul_tn(w1_of(i), g_theta), transpose(b[i]));
      gb.push_back(matmul_tn(w12, g_theta));
    }
    if (!std::isfinite(loss)) {
      rep.diverged = true;
      rep.joint_loss = loss;
      return rep;
    }
    for (std::size_t j = 0; j < w1.size(); ++j) adam_step(w1[j], g1[j], w1_state[j]);
    adam_step(w2, g2, w2_state);
    for (std::size_t i = 0; i < k; ++i) adam_step(b[i], gb[i], b_state[i]);
  }

  // Alternating least squares polish.
  double previous = total_loss();
  for (std::size_t sweep = 0; sweep < options.max_sweeps; ++sweep) {
    if (shared == SharedFactor::kW2) {
      for (std::size_t i = 0; i < k; ++i) {
        const Matrix c = matmul(w2, b[i]);
        w1[i] = matmul(matmul(pseudoinverse(design[i]), targets[i]), pseudoinverse(c));
      }
    } else {
      // W1 minimizes sum_i ||M_i W1 C_i - T_i||^2; conjugate gradient on the
      // normal equations sum_i M_i^T M_i W1 C_i C_i^T = sum_i M_i^T T_i C_i^T.
      std::vector<Matrix> gram;
      std::vector<Matrix> cct;
      Matrix rhs(w1[0].rows(), d);
      for (std::size_t i = 0; i < k; ++i) {
        const Matrix c = matmul(w2, b[i]);
        gram.push_back(matmul_tn(design[i], design[i]));
        cct.push_back(matmul_nt(c, c));
        rhs += matmul_nt(matmul_tn(design[i], targets[i]), c);
      }
      auto apply = [&](const Matrix& w) {
        Matrix out(w.rows(), w.cols());
        for (std::size_t i = 0; i < k; ++i) out += matmul(matmul(gram[i], w), cct[i]);
        return out;
      };
      Matrix& w = w1[0];
      Matrix r = rhs - apply(w);
      Matrix p = r;
      double rr = squared_norm(r);
      for (std::size_t it = 0; it < w.size() && rr > 1e-30; ++it) {
        const Matrix ap = apply(p);
        const double pap = dot(p.values(), ap.values());
        if (!(pap > 0.0)) break;
        const double step = rr / pap;
        w.add_scaled(p, step);
        r.add_scaled(ap, -step);
        const double rr_next = squared_norm(r);
        p = r + (rr_next / rr) * p;
        rr = rr_next;
      }
    }
    for (std::size_t i = 0; i < k; ++i) {
      b[i] = matmul(pseudoinverse(matmul(design[i], matmul(w1_of(i), w2))), targets[i]);
    }
    const double loss = total_loss();
    if (!std::isfinite(loss)) {
      rep.diverged = true;
      break;
    }
    const bool settled = previous - loss <= options.tolerance * std::max(loss, 1e-300);
    previous = loss;
    if (settled) break;
  }
  rep.joint_loss = previous;
  rep.absolute_gap = rep.joint_loss - rep.independent_loss;
  rep.relative_gap = rep.absolute_gap / std::max(rep.independent_loss, 1e-300);
  return rep;
}

Matrix soft_reg_closed_form(const FixedPointProblem& p) {
  const double c = (1.0 - p.beta) * p.alpha_a;
  Matrix lhs = c * p.target_a;
  lhs.add_scaled(matmul_nt(matmul(p.align, p.u_b), p.r), p.beta);
  Matrix m = c * Matrix::identity(p.r.rows());
  m.add_scaled(matmul_nt(p.r, p.r), p.beta);
  return solve_right(lhs, m, "(1-beta) alpha I + beta R R^T");
}

Matrix soft_reg_gradient(const FixedPointProblem& p, const Matrix& u_a, const Matrix& u_b) {
  Matrix g = (2.0 * (1.0 - p.beta) * p.alpha_a) * (u_a - p.target_a);
  const Matrix e = matmul(u_a, p.r) - matmul(p.align, u_b);
  g.add_scaled(matmul_nt(e, p.r), 2.0 * p.beta);
  return g;
}

double soft_reg_objective(const FixedPointProblem& p, const Matrix& u_a, const Matrix& u_b) {
  return (1.0 - p.beta) * p.alpha_a * squared_norm(u_a - p.target_a) +
         (1.0 - p.beta) * p.alpha_b * squared_norm(u_b - p.target_b) +
         p.beta * squared_norm(matmul(u_a, p.r) - matmul(p.align, u_b));
}

Matrix recon_closed_form(const FixedPointProblem& p) {
  const double c = (1.0 - p.beta) * p.alpha_a;
  Matrix lhs = c * p.target_a;
  lhs.add_scaled(matmul_nt(matmul(p.align, p.u_b), p.r), p.beta);
  const Matrix ubr = matmul_nt(p.u_b, p.r);  // U_B R^T
  Matrix m = c * Matrix::identity(p.r.rows());
  m.add_scaled(matmul_tn(ubr, ubr), p.beta);
  return solve_right(lhs, m, "(1-beta) alpha I + beta R U_B^T U_B R^T");
}

Matrix recon_gradient(const FixedPointProblem& p, const Matrix& u_a, const Matrix& u_b) {
  Matrix g = (2.0 * (1.0 - p.beta) * p.alpha_a) * (u_a - p.target_a);
  const Matrix e = matmul_nt(matmul(u_a, p.r), u_b) - p.align;
  g.add_scaled(matmul_nt(matmul(e, u_b), p.r), 2.0 * p.beta);
  return g;
}

double recon_objective(const FixedPointProblem& p, const Matrix& u_a, const Matrix& u_b) {
  return (1.0 - p.beta) * p.alpha_a * squared_norm(u_a - p.target_a) +
         (1.0 - p.beta) * p.alpha_b * squared_norm(u_b - p.target_b) +
         p.beta * squared_norm(matmul_nt(matmul(u_a, p.r), u_b) - p.align);
}

FixedPointReport soft_reg_fixed_point(const FixedPointProblem& p) {
  BlockOps ops;
  ops.grad_a = [&](const Matrix& a, const Matrix& b) { return soft_reg_gradient(p, a, b); };
  ops.grad_b = [&](const Matrix& a, const Matrix& b) {
    Matrix g = (2.0 * (1.0 - p.beta) * p.alpha_b) * (b - p.target_b);
    const Matrix e = matmul(a, p.r) - matmul(p.align, b);
    g.add_scaled(matmul_tn(p.align, e), -2.0 * p.beta);
    return g;
  };
  ops.lipschitz_a = [&](const Matrix&) {
    const double s = spectral_norm(p.r);
    return 2.0 * ((1.0 - p.beta) * p.alpha_a + p.beta * s * s);
  };
  ops.lipschitz_b = [&](const Matrix&) {
    const double s = spectral_norm(p.align);
    return 2.0 * ((1.0 - p.beta) * p.alpha_b + p.beta * s * s);
  };
  ops.closed_form_a = [&](const Matrix& b) {
    FixedPointProblem q = p;
    q.u_b = b;
    return soft_reg_closed_form(q);
  };
  return fixed_point_report(p, ops);
}

FixedPointReport recon_fixed_point(const FixedPointProblem& p) {
  BlockOps ops;
  ops.grad_a = [&](const Matrix& a, const Matrix& b) { return recon_gradient(p, a, b); };
  ops.grad_b = [&](const Matrix& a, const Matrix& b) {
    Matrix g = (2.0 * (1.0 - p.beta) * p.alpha_b) * (b - p.target_b);
    const Matrix e = matmul_nt(matmul(a, p.r), b) - p.align;  // n_A x n_B
    g.add_scaled(matmul_tn(e, matmul(a, p.r)), 2.0 * p.beta);
    return g;
  };
  ops.lipschitz_a = [&](const Matrix& b) {
    const double s = spectral_norm(matmul_nt(b, p.r));
    return 2.0 * ((1.0 - p.beta) * p.alpha_a + p.beta * s * s);
  };
  ops.lipschitz_b = [&](const Matrix& a) {
    const double s = spectral_norm(matmul(a, p.r));
    return 2.0 * ((1.0 - p.beta) * p.alpha_b + p.beta * s * s);
  };
  ops.closed_form_a = [&](const Matrix& b) {
    FixedPointProblem q = p;
    q.u_b = b;
    return recon_closed_form(q);
  };
  return fixed_point_report(p, ops);
}

FixedPointProblem random_fixed_point_problem(std::size_t n_a, std::size_t n_b,
                                             std::size_t d_a, std::size_t d_b,
                                             std::uint64_t seed) {
  if (d_a > n_a || d_b > n_b) throw ContractError("rank d cannot exceed node count");
  Rng rng(derive_seed(seed, "fixed-point"));
  auto low_rank_target = [&](std::size_t n, std::size_t d) {
    const Matrix g = gaussian(n, d, rng);
    return linear_target(matmul_nt(g, g)).target();
  };
  FixedPointProblem p;
  p.target_a = low_rank_target(n_a, d_a);
  p.target_b = low_rank_target(n_b, d_b);
  p.align = Matrix(n_a, n_b);
  std::vector<std::size_t> perm(n_b);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  const std::size_t aligned = std::max<std::size_t>(1, std::min(n_a, n_b) / 2);
  for (std::size_t i = 0; i < aligned; ++i) p.align(i, perm[i]) = 1.0;
  p.r = gaussian(d_a, d_b, rng, 1.0 / std::sqrt(static_cast<double>(d_a)));
  p.u_b = gaussian(n_b, d_b, rng);
  p.alpha_a = uniform_real(rng, 0.2, 0.8);
  p.alpha_b = 1.0 - p.alpha_a;
  p.beta = uniform_real(rng, 0.2, 0.8);
  return p;
}

double sine_between(std::span<const double> a, std::span<const double> b) {
  const double na = std::sqrt(dot(a, a));
  const double nb = std::sqrt(dot(b, b));
  if (na == 0.0 || nb == 0.0) return 1.0;
  const double c = std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
  return std::sqrt(std::max(0.0, 1.0 - c * c));
}

PositiveTransferRow positive_transfer_run(std::size_t m, std::size_t n, double angle,
                                          std::uint64_t seed,
                                          const PositiveTransferOptions& options) {
  Rng rng(derive_seed(seed, "positive-transfer"));
  // Planted directions at the requested angle.
  Matrix basis = gaussian(m, 2, rng);
  std::vector<double> e1(m), e2(m);
  for (std::size_t i = 0; i < m; ++i) e1[i] = basis(i, 0);
  const double n1 = std::sqrt(dot(e1, e1));
  for (double& v : e1) v /= n1;
  for (std::size_t i = 0; i < m; ++i) e2[i] = basis(i, 1);
  const double proj = dot(e1, e2);
  for (std::size_t i = 0; i < m; ++i) e2[i] -= proj * e1[i];
  const double n2 = std::sqrt(dot(e2, e2));
  for (double& v : e2) v /= n2;
  Matrix theta_a(m, 1), theta_b(m, 1);
  for (std::size_t i = 0; i < m; ++i) {
    theta_a(i, 0) = e1[i];
    theta_b(i, 0) = std::cos(angle) * e1[i] + std::sin(angle) * e2[i];
  }

  const double p = std::min(1.0, options.mean_degree / static_cast<double>(n - 1));
  std::normal_distribution<double> noise(0.0, options.noise);
  auto make = [&](const Matrix& theta, Matrix& z, Matrix& y) {
    const Matrix a = random_adjacency(n, p, rng);
    const Matrix x = gaussian(n, m, rng);
    z = matmul(normalize_adjacency(a).matrix, x);
    y = relu(matmul(z, theta));
    for (double& v : y.values()) v += noise(rng);
  };
  Matrix za, ya, zb, yb;
  make(theta_a, za, ya);
  make(theta_b, zb, yb);

  // Least-squares start on the stacked data, then Adam on the ReLU loss
  // (1/n) sum_i ||ReLU(Z_i w) - y_i||^2.
  Matrix gram = matmul_tn(za, za) + matmul_tn(zb, zb);
  Matrix rhs = matmul_tn(za, ya) + matmul_tn(zb, yb);
  Matrix w = matmul(pseudoinverse(gram), rhs);
  AdamState state = AdamState::for_parameter(w, {options.learning_rate});
  const double scale = 2.0 / static_cast<double>(n);
  for (std::size_t step = 0; step < options.steps; ++step) {
    Matrix g(m, 1);
    for (const auto& [z, y] : {std::pair<const Matrix&, const Matrix&>{za, ya},
                               std::pair<const Matrix&, const Matrix&>{zb, yb}}) {
      Matrix pre = matmul(z, w);
      for (std::size_t i = 0; i < pre.rows(); ++i) {
        pre(i, 0) = pre(i, 0) > 0.0 ? scale * (pre(i, 0) - y(i, 0)) : 0.0;
      }
      g += matmul_tn(z, pre);
    }
    adam_step(w, g, state);
  }

  PositiveTransferRow row;
  row.angle = angle;
  row.n = n;
  row.seed = seed;
  row.sin_between = sine_between(theta_a.values(), theta_b.values());
  row.sin_error = sine_between(w.values(), theta_a.values());
  row.required_n = required_samples(m, options.regime_c, squared_norm(yb));
  row.in_regime = static_cast<double>(n) >= row.required_n;
  const SvdResult s = svd(zb);
  row.kappa_b = s.singular_values.back() > 0.0
                    ? s.singular_values.front() / s.singular_values.back()
                    : INFINITY;
  return row;
}

double required_samples(std::size_t m, double c, double y_b_squared_norm) {
  if (!(c > 0.0)) throw ContractError("regime constant c must be > 0");
  const double md = static_cast<double>(m);
  const double log_m = std::log(md);
  return std::max(md * log_m / (c * c) * (1.0 / (c * c) + log_m), y_b_squared_norm / (c * c));
}

std::vector<PositiveTransferRow> positive_transfer_experiment(
    std::uint64_t seed, const PositiveTransferOptions& options) {
  std::vector<PositiveTransferRow> rows;
  for (std::size_t ai = 0; ai < options.angles.size(); ++ai) {
    for (std::size_t n : options.sizes) {
      for (std::size_t s = 0; s < options.seeds; ++s) {
        rows.push_back(positive_transfer_run(options.m, n, options.angles[ai],
                                             derive_seed(seed, "pt", s), options));
      }
    }
  }
  return rows;
}

std::vector<TheoryCheck> run_theory_checks(std::uint64_t seed) {
  std::vector<TheoryCheck> checks;
  constexpr std::size_t kInstances = 5;

  // Closed-form optimum versus gradient descent; normal equations.
  double worst_gd = 0.0;
  double worst_normal = 0.0;
  for (std::size_t i = 0; i < kInstances; ++i) {
    const LinearGraph g = random_linear_graph(10, 4, 0.4, derive_seed(seed, "closed-form", i));
    const Matrix theta = closed_form_theta(g.a_hat, g.x, g.target);
    const double best = linear_loss(g.a_hat, g.x, theta, g.target);
    const LinearFit fit = train_linear_gd(g.a_hat, g.x, g.target);
    worst_gd = std::max(worst_gd, std::abs(fit.loss - best) / std::max(best, 1e-300));
    const Matrix m = linear_design(g.a_hat, g.x);
    worst_normal = std::max(
        worst_normal, max_abs(matmul_tn(m, matmul(m, theta) - g.target.target())));
  }
  checks.push_back({"closed_form_vs_gradient_descent", format_expected("<=", 1e-4), worst_gd,
                    worst_gd <= 1e-4});
  checks.push_back({"closed_form_normal_equations", format_expected("<=", 1e-8), worst_normal,
                    worst_normal <= 1e-8});

  // No transfer at large d; a capacity gap at d = 1.
  double worst_large = 0.0;
  double smallest_d1 = INFINITY;
  for (std::size_t i = 0; i < kInstances; ++i) {
    std::vector<LinearGraph> graphs = {
        random_linear_graph(12, 4, 0.35, derive_seed(seed, "no-transfer-a", i)),
        random_linear_graph(10, 3, 0.35, derive_seed(seed, "no-transfer-b", i))};
    const std::size_t total = graphs[0].target.rank + graphs[1].target.rank;
    const NoTransferReport large =
        no_transfer_experiment(graphs, total, SharedFactor::kW2, derive_seed(seed, "nt", i));
    const NoTransferReport small =
        no_transfer_experiment(graphs, 1, SharedFactor::kW2, derive_seed(seed, "nt", i));
    worst_large = std::max(worst_large, large.diverged ? INFINITY : large.relative_gap);
    smallest_d1 = std::min(smallest_d1, small.diverged ? 0.0 : small.relative_gap);
  }
  checks.push_back({"no_transfer_gap_at_total_rank", format_expected("<=", 1e-3), worst_large,
                    worst_large <= 1e-3});
  checks.push_back({"no_transfer_gap_at_d1", format_expected(">", 1e-2), smallest_d1,
                    smallest_d1 > 1e-2});

  // Fixed points of the alignment objectives.
  double soft_grad = 0.0, soft_dist = 0.0, recon_grad = 0.0, recon_dist = 0.0;
  for (std::size_t i = 0; i < 10; ++i) {
    const FixedPointProblem p =
        random_fixed_point_problem(8, 7, 3, 2, derive_seed(seed, "fixed-point", i));
    const FixedPointReport soft = soft_reg_fixed_point(p);
    const FixedPointReport recon = recon_fixed_point(p);
    soft_grad = std::max(soft_grad, soft.gradient_norm);
    soft_dist = std::max({soft_dist, soft.block_distance, soft.alternating_distance});
    recon_grad = std::max(recon_grad, recon.gradient_norm);
    recon_dist = std::max({recon_dist, recon.block_distance, recon.alternating_distance});
  }
  checks.push_back({"soft_reg_gradient_at_closed_form", format_expected("<=", 1e-8),
                    soft_grad, soft_grad <= 1e-8});
  checks.push_back({"soft_reg_descent_distance", format_expected("<=", 1e-4), soft_dist,
                    soft_dist <= 1e-4});
  checks.push_back({"recon_gradient_at_closed_form", format_expected("<=", 1e-8), recon_grad,
                    recon_grad <= 1e-8});
  checks.push_back({"recon_descent_distance", format_expected("<=", 1e-4), recon_dist,
                    recon_dist <= 1e-4});

  // Positive transfer trend and bound.
  const PositiveTransferOptions options;
  const auto rows = positive_transfer_experiment(seed, options);
  std::vector<double> first, last;
  double worst_excess = -INFINITY;
  for (const PositiveTransferRow& r : rows) {
    if (r.angle == 0.0 && r.n == options.sizes.front()) first.push_back(r.sin_error);
    if (r.angle == 0.0 && r.n == options.sizes.back()) last.push_back(r.sin_error);
    if (r.in_regime) worst_excess = std::max(worst_excess, r.sin_error - r.sin_between);
  }
  const double ratio = median(last) / std::max(median(first), 1e-300);
  checks.push_back({"positive_transfer_error_ratio", format_expected("<=", 1.0 / 3.0), ratio,
                    ratio <= 1.0 / 3.0});
  checks.push_back({"positive_transfer_bound_excess", format_expected("<=", 0.15),
                    worst_excess, worst_excess <= 0.15});
  return checks;
}

}  // namespace pagcn
