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
#include <functional>
#include <span>
#include <vector>

#include "pagcn/graph.hpp"

namespace pagcn {

// P(random positive outranks random negative), ties counted 1/2.
double auc(std::span<const double> positive_scores,
           std::span<const double> negative_scores);

// Average precision over the merged ranking by descending score. The merged
// list is positives followed by negatives in input order and the sort is
// stable, so a tied positive ranks ahead of a tied negative.
double average_precision(std::span<const double> positive_scores,
                         std::span<const double> negative_scores);

// K / sum(1 / v_i). Every value must be > 0.
double harmonic_overall(std::span<const double> values);

struct RankingMetrics {
  double mrr_raw = 0.0;
  double mrr_filtered = 0.0;
  std::vector<std::size_t> hits_k;          // the requested k values
  std::vector<double> hits_filtered;        // filtered Hits@k, same order
  std::size_t num_ranks = 0;                // 2 per test triple
};

using TripleScorer = std::function<double(std::size_t head, std::size_t relation,
                                          std::size_t tail)>;

// Ranks each test triple against every candidate tail and every candidate
// head. Raw ranks use all entities; filtered ranks drop candidates forming
// another triple in `known`. Ties take the average rank of the tied block.
RankingMetrics mrr_hits(const TripleScorer& score, std::size_t num_entities,
                        const std::vector<Triple>& test,
                        const std::vector<Triple>& known,
                        const std::vector<std::size_t>& k_values = {1, 3});

// Same ranking when all candidate scores are available at once:
// score_tails(h, r) returns scores for every tail, score_heads(r, t) for
// every head.
using CandidateScorer =
    std::function<std::vector<double>(std::size_t fixed, std::size_t relation)>;
RankingMetrics mrr_hits_batched(const CandidateScorer& score_tails,
                                const CandidateScorer& score_heads,
                                std::size_t num_entities,
                                const std::vector<Triple>& test,
                                const std::vector<Triple>& known,
                                const std::vector<std::size_t>& k_values = {1, 3});

}  // namespace pagcn
