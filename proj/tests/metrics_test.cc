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

#include <algorithm>
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "pagcn/errors.hpp"
#include "pagcn/metrics.hpp"
#include "pagcn/random.hpp"

namespace pagcn {
namespace {

using Scores = std::vector<double>;

TEST(AucTest, Examples) {
  EXPECT_EQ(auc(Scores{0.9}, Scores{0.1}), 1.0);
  EXPECT_EQ(auc(Scores{0.9, 0.3}, Scores{0.5, 0.1}), 0.75);
  EXPECT_EQ(auc(Scores{0.4, 0.4}, Scores{0.4}), 0.5);
  EXPECT_THROW(auc(Scores{}, Scores{0.1}), ContractError);
}

TEST(AveragePrecisionTest, Examples) {
  EXPECT_EQ(average_precision(Scores{0.9}, Scores{0.1}), 1.0);
  EXPECT_EQ(average_precision(Scores{0.1}, Scores{0.9}), 0.5);
  EXPECT_NEAR(average_precision(Scores{0.9, 0.1}, Scores{0.5}), (1.0 + 2.0 / 3.0) / 2.0, 1e-15);
  EXPECT_THROW(average_precision(Scores{0.1}, Scores{}), ContractError);
}

// Pairwise counting, kept in halves so the result is exact.
double brute_auc(const Scores& pos, const Scores& neg) {
  std::size_t halves = 0;
  for (double p : pos) {
    for (double n : neg) halves += p > n ? 2 : (p == n ? 1 : 0);
  }
  return static_cast<double>(halves) / (2.0 * pos.size() * neg.size());
}

// Rank-by-rank precision. Ties go to positives first, then input order.
double brute_ap(const Scores& pos, const Scores& neg) {
  std::vector<std::pair<std::size_t, double>> at;  // (position, precision)
  for (std::size_t i = 0; i < pos.size(); ++i) {
    std::size_t ahead_pos = 0;
    for (std::size_t j = 0; j < pos.size(); ++j) {
      if (pos[j] > pos[i] || (pos[j] == pos[i] && j < i)) ++ahead_pos;
    }
    std::size_t ahead_neg = 0;
    for (double n : neg) ahead_neg += n > pos[i] ? 1 : 0;
    const std::size_t position = ahead_pos + ahead_neg + 1;
    at.push_back({position, static_cast<double>(ahead_pos + 1) / static_cast<double>(position)});
  }
  std::sort(at.begin(), at.end());
  double sum = 0.0;
  for (const auto& [position, precision] : at) sum += precision;
  return sum / static_cast<double>(pos.size());
}

TEST(RankingMetricsTest, MatchBruteForceOnRandomScoreSets) {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t np = 1 + uniform_index(rng, 12);
    const std::size_t nn = 1 + uniform_index(rng, 12);
    // Coarse scores make ties common.
    const bool coarse = trial % 2 == 0;
    auto draw = [&] {
      return coarse ? static_cast<double>(uniform_index(rng, 5)) : uniform_real(rng, 0.0, 1.0);
    };
    Scores pos(np);
    Scores neg(nn);
    for (double& v : pos) v = draw();
    for (double& v : neg) v = draw();
    ASSERT_EQ(auc(pos, neg), brute_auc(pos, neg)) << "trial " << trial;
    ASSERT_EQ(average_precision(pos, neg), brute_ap(pos, neg)) << "trial " << trial;
  }
}

TEST(MrrHitsTest, Examples) {
  // Entity 0 has the highest score on either side.
  const Scores entity_score = {5.0, 4.0, 3.0, 2.0, 1.0};
  auto score = [&](std::size_t h, std::size_t, std::size_t t) {
    return entity_score[h] + entity_score[t];
  };
  const RankingMetrics top = mrr_hits(score, 5, {{0, 0, 0}}, {{0, 0, 0}});
  EXPECT_EQ(top.mrr_raw, 1.0);
  EXPECT_EQ(top.hits_filtered[0], 1.0);
  EXPECT_EQ(top.num_ranks, 2u);
  EXPECT_THROW(mrr_hits(score, 5, {}, {}), ContractError);
}

TEST(MrrHitsTest, RanksOneTwoFour) {
  // Three test triples whose tails rank 1, 2 and 4.
  const Scores tail_scores = {4.0, 3.0, 2.0, 1.0};
  auto tails = [&](std::size_t, std::size_t) { return tail_scores; };
  // Every head is ranked first: the true head scores 1, the rest 0.
  const std::vector<Triple> test = {{0, 0, 0}, {1, 1, 0}, {2, 3, 0}};
  std::size_t call = 0;
  auto heads = [&](std::size_t tail, std::size_t) {
    Scores s(4, 0.0);
    for (const Triple& t : test) {
      if (t.tail == tail) s[t.head] = 1.0;
    }
    ++call;
    return s;
  };
  const RankingMetrics m = mrr_hits_batched(tails, heads, 4, test, {});
  // Tail ranks 1, 2, 4 and head ranks 1, 1, 1.
  EXPECT_NEAR(m.mrr_raw, (1.0 + 0.5 + 0.25 + 3.0) / 6.0, 1e-15);
  EXPECT_EQ(m.num_ranks, 6u);
  EXPECT_EQ(call, 3u);
}

TEST(MrrHitsTest, KnownCompetitorRaisesFilteredRank) {
  // Entities 0..2; for (0, r, 1) the tail candidate 2 scores higher but
  // (0, r, 2) is a known triple.
  const std::vector<Triple> known = {{0, 1, 0}, {0, 2, 0}};
  auto score = [](std::size_t h, std::size_t, std::size_t t) {
    const double s[3][3] = {{0, 2, 3}, {2, 0, 1}, {3, 1, 0}};
    return s[h][t];
  };
  const RankingMetrics m = mrr_hits(score, 3, {{0, 1, 0}}, known);
  // Tail side: raw rank 2, filtered 1. Head side (?, r, 1): candidates
  // 0 -> 2, 1 -> 0, 2 -> 1, so rank 1 in both settings.
  EXPECT_NEAR(m.mrr_raw, (0.5 + 1.0) / 2.0, 1e-15);
  EXPECT_NEAR(m.mrr_filtered, 1.0, 1e-15);
  EXPECT_GT(m.mrr_filtered, m.mrr_raw);
}

TEST(MrrHitsTest, TiesTakeTheAverageRank) {
  auto flat = [](std::size_t, std::size_t, std::size_t) { return 1.0; };
  const RankingMetrics m = mrr_hits(flat, 3, {{0, 1, 0}}, {{0, 1, 0}});
  // Three-way tie: average rank 2 on both sides.
  EXPECT_EQ(m.mrr_raw, 0.5);
}

TEST(MrrHitsTest, FilteredNeverBelowRawAndBatchedAgrees) {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 4 + uniform_index(rng, 6);
    std::vector<double> table(n * n * 2);
    for (double& v : table) v = static_cast<double>(uniform_index(rng, 4));
    auto score = [&](std::size_t h, std::size_t r, std::size_t t) {
      return table[(h * n + t) * 2 + r];
    };
    std::set<Triple> known_set;
    for (int k = 0; k < 8; ++k) {
      known_set.insert({uniform_index(rng, n), uniform_index(rng, n), uniform_index(rng, 2)});
    }
    const std::vector<Triple> known(known_set.begin(), known_set.end());
    const std::vector<Triple> test(known.begin(), known.begin() + 3);
    const RankingMetrics m = mrr_hits(score, n, test, known);
    EXPECT_GE(m.mrr_filtered, m.mrr_raw);
    auto tails = [&](std::size_t h, std::size_t r) {
      Scores s(n);
      for (std::size_t e = 0; e < n; ++e) s[e] = score(h, r, e);
      return s;
    };
    auto heads = [&](std::size_t t, std::size_t r) {
      Scores s(n);
      for (std::size_t e = 0; e < n; ++e) s[e] = score(e, r, t);
      return s;
    };
    const RankingMetrics b = mrr_hits_batched(tails, heads, n, test, known);
    EXPECT_EQ(b.mrr_raw, m.mrr_raw);
    EXPECT_EQ(b.mrr_filtered, m.mrr_filtered);
    EXPECT_EQ(b.hits_filtered, m.hits_filtered);
  }
}

TEST(HarmonicOverallTest, Examples) {
  EXPECT_NEAR(harmonic_overall(Scores{0.769, 0.840}), 0.803, 5e-4);
  EXPECT_DOUBLE_EQ(harmonic_overall(Scores{0.7, 0.7, 0.7}), 0.7);
  EXPECT_DOUBLE_EQ(harmonic_overall(Scores{0.5, 1.0}), 2.0 / 3.0);
  EXPECT_THROW(harmonic_overall(Scores{0.5, 0.0}), ContractError);
}

TEST(HarmonicOverallTest, BoundedByMinAndArithmeticMean) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    Scores v(2 + uniform_index(rng, 3));
    for (double& x : v) x = uniform_real(rng, 0.01, 1.0);
    const double h = harmonic_overall(v);
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    EXPECT_GE(h, *std::min_element(v.begin(), v.end()) * (1 - 1e-15));
    EXPECT_LE(h, mean * (1 + 1e-15));
  }
}

}  // namespace
}  // namespace pagcn
