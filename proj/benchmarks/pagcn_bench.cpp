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

#include <random>

#include <benchmark/benchmark.h>

#include "pagcn/cross_net.hpp"
#include "pagcn/gcn.hpp"
#include "pagcn/metrics.hpp"
#include "pagcn/numerics.hpp"
#include "pagcn/random.hpp"
#include "pagcn/synthetic.hpp"

namespace {

using namespace pagcn;

Matrix gaussian(std::size_t r, std::size_t c, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(r, c);
  for (double& v : m.values()) v = normal(rng);
  return m;
}

SyntheticPair pair_with(std::size_t nodes_per_block) {
  SyntheticPairSpec s;
  s.nodes_per_block = nodes_per_block;
  return generate_synthetic_pair(s);
}

void BM_GcnForward(benchmark::State& state) {
  const SyntheticPair p = pair_with(static_cast<std::size_t>(state.range(0)) / 4);
  const GcnInput input = GcnInput::make(normalize_adjacency(p.a), p.a.features);
  const GcnParams params = init_params(p.a.features.cols(), 0, 64, 1);
  for (auto _ : state) benchmark::DoNotOptimize(gcn_forward(input, params.view()));
}
BENCHMARK(BM_GcnForward)->Arg(200)->Arg(800)->Unit(benchmark::kMicrosecond);

void BM_GcnBackward(benchmark::State& state) {
  const SyntheticPair p = pair_with(static_cast<std::size_t>(state.range(0)) / 4);
  const GcnInput input = GcnInput::make(normalize_adjacency(p.a), p.a.features);
  const GcnParams params = init_params(p.a.features.cols(), 0, 64, 1);
  const ForwardCache cache = gcn_forward(input, params.view());
  const Matrix grad_u = gaussian(cache.u.rows(), cache.u.cols(), 2);
  for (auto _ : state) benchmark::DoNotOptimize(gcn_backward(input, cache, grad_u, params.view()));
}
BENCHMARK(BM_GcnBackward)->Arg(200)->Arg(800)->Unit(benchmark::kMicrosecond);

void BM_ReconLossWithGradient(benchmark::State& state) {
  const SyntheticPair p = pair_with(50);
  const LinkTask task = prepare_link_task(p.a, 1);
  const Matrix u = row_softmax(gaussian(p.a.num_nodes(), 64, 3));
  const auto negatives = sample_training_negatives(task.graph, task.split.train.size(), 1, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(recon_loss_with_gradient(u, task.split.train, negatives));
  }
}
BENCHMARK(BM_ReconLossWithGradient)->Unit(benchmark::kMicrosecond);

void BM_Svd(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const Matrix m = gaussian(n, n, 5);
  for (auto _ : state) benchmark::DoNotOptimize(svd(m));
}
BENCHMARK(BM_Svd)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_CombinedLossEpoch(benchmark::State& state) {
  const SyntheticPair p = pair_with(50);
  CrossData data;
  data.graphs.push_back(prepare_link_task(p.a, 1));
  data.graphs.push_back(prepare_link_task(p.b, 2));
  data.alignments.push_back({0, 1, p.alignment});
  const VariantId id = static_cast<VariantId>(state.range(0));
  const ModelConfig c = config_for_variant(id, 64);
  const CrossParams params = build_model(c, data, 3);
  std::uint64_t epoch = 0;
  for (auto _ : state) benchmark::DoNotOptimize(combined_loss(c, params, data, ++epoch));
  state.SetLabel(to_string(id));
}
BENCHMARK(BM_CombinedLossEpoch)
    ->Arg(static_cast<int>(VariantId::kSeparated))
    ->Arg(static_cast<int>(VariantId::kM5))
    ->Arg(static_cast<int>(VariantId::kM13))
    ->Unit(benchmark::kMillisecond);

void BM_Auc(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  Rng rng(6);
  std::vector<double> pos(n);
  std::vector<double> neg(n);
  for (double& v : pos) v = uniform_real(rng, 0.2, 1.0);
  for (double& v : neg) v = uniform_real(rng, 0.0, 0.8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(auc(pos, neg));
    benchmark::DoNotOptimize(average_precision(pos, neg));
  }
}
BENCHMARK(BM_Auc)->Arg(1000)->Arg(100000)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
