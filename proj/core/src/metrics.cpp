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

#include "pagcn/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "pagcn/errors.hpp"

namespace pagcn {
namespace {

struct RankCounts {
  std::size_t higher = 0;
  std::size_t tied = 0;  // other candidates with an equal score
};

double average_rank(const RankCounts& c) {
  return 1.0 + static_cast<double>(c.higher) + 0.5 * static_cast<double>(c.tied);
}

class RankAccumulator {
 public:
  explicit RankAccumulator(const std::vector<std::size_t>& k_values)
      : k_values_(k_values), hits_(k_values.size(), 0.0) {}

  void add(double raw_rank, double filtered_rank) {
    raw_sum_ += 1.0 / raw_rank;
    filtered_sum_ += 1.0 / filtered_rank;
    for (std::size_t i = 0; i < k_values_.size(); ++i) {
      if (filtered_rank <= static_cast<double>(k_values_[i])) hits_[i] += 1.0;
    }
    ++count_;
  }

  RankingMetrics finish() const {
    RankingMetrics m;
    const double n = static_cast<double>(count_);
    m.mrr_raw = raw_sum_ / n;
    m.mrr_filtered = filtered_sum_ / n;
    m.hits_k = k_values_;
    for (double h : hits_) m.hits_filtered.push_back(h / n);
    m.num_ranks = count_;
    return m;
  }

 private:
  std::vector<std::size_t> k_values_;
  std::vector<double> hits_;
  double raw_sum_ = 0.0;
  double filtered_sum_ = 0.0;
  std::size_t count_ = 0;
};

// Ranks candidates[target] among all candidates; `is_known(e)` marks
// entities removed in the filtered setting.
template <typename KnownFn>
std::pair<double, double> rank_target(const std::vector<double>& candidates,
                                      std::size_t target, KnownFn is_known) {
  const double s = candidates[target];
  RankCounts raw;
  RankCounts filtered;
  for (std::size_t e = 0; e < candidates.size(); ++e) {
    if (e == target) continue;
    const bool higher = candidates[e] > s;
    const bool tied = candidates[e] == s;
    if (!higher && !tied) continue;
    (higher ? raw.higher : raw.tied) += 1;
    if (!is_known(e)) (higher ? filtered.higher : filtered.tied) += 1;
  }
  return {average_rank(raw), average_rank(filtered)};
}

}  // namespace

double auc(std::span<const double> positive_scores,
           std::span<const double> negative_scores) {
  if (positive_scores.empty() || negative_scores.empty()) {
    throw ContractError("auc needs non-empty positive and negative scores");
  }
  std::vector<double> neg(negative_scores.begin(), negative_scores.end());
  std::sort(neg.begin(), neg.end());
  // Twice the Mann-Whitney U statistic, kept integral.
  std::size_t twice_wins = 0;
  for (double p : positive_scores) {
    const auto lo = std::lower_bound(neg.begin(), neg.end(), p);
    const auto hi = std::upper_bound(lo, neg.end(), p);
    twice_wins += 2 * static_cast<std::size_t>(lo - neg.begin()) +
                  static_cast<std::size_t>(hi - lo);
  }
  return static_cast<double>(twice_wins) /
         (2.0 * static_cast<double>(positive_scores.size()) *
          static_cast<double>(negative_scores.size()));
}

double average_precision(std::span<const double> positive_scores,
                         std::span<const double> negative_scores) {
  if (positive_scores.empty() || negative_scores.empty()) {
    throw ContractError("average_precision needs non-empty score lists");
  }
  struct Entry {
    double score;
    bool positive;
  };
  std::vector<Entry> merged;
  merged.reserve(positive_scores.size() + negative_scores.size());
  for (double s : positive_scores) merged.push_back({s, true});
  for (double s : negative_scores) merged.push_back({s, false});
  std::stable_sort(merged.begin(), merged.end(),
                   [](const Entry& a, const Entry& b) { return a.score > b.score; });
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < merged.size(); ++k) {
    if (!merged[k].positive) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(k + 1);
  }
  return sum / static_cast<double>(positive_scores.size());
}

double harmonic_overall(std::span<const double> values) {
  if (values.empty()) throw ContractError("harmonic_overall needs at least one value");
  double inv = 0.0;
  for (double v : values) {
    if (!(v > 0.0)) throw ContractError("harmonic_overall needs values > 0");
    inv += 1.0 / v;
  }
  return static_cast<double>(values.size()) / inv;
}

RankingMetrics mrr_hits(const TripleScorer& score, std::size_t num_entities,
                        const std::vector<Triple>& test,
                        const std::vector<Triple>& known,
                        const std::vector<std::size_t>& k_values) {
  auto tails = [&](std::size_t head, std::size_t relation) {
    std::vector<double> out(num_entities);
    for (std::size_t e = 0; e < num_entities; ++e) out[e] = score(head, relation, e);
    return out;
  };
  auto heads = [&](std::size_t tail, std::size_t relation) {
    std::vector<double> out(num_entities);
    for (std::size_t e = 0; e < num_entities; ++e) out[e] = score(e, relation, tail);
    return out;
  };
  return mrr_hits_batched(tails, heads, num_entities, test, known, k_values);
}

RankingMetrics mrr_hits_batched(const CandidateScorer& score_tails,
                                const CandidateScorer& score_heads,
                                std::size_t num_entities,
                                const std::vector<Triple>& test,
                                const std::vector<Triple>& known,
                                const std::vector<std::size_t>& k_values) {
  if (test.empty()) throw ContractError("mrr_hits needs a non-empty test set");
  const std::set<Triple> known_set(known.begin(), known.end());
  RankAccumulator acc(k_values);
  for (const Triple& t : test) {
    if (t.head >= num_entities || t.tail >= num_entities) {
      throw ContractError("test triple entity out of range");
    }
    const auto tail_scores = score_tails(t.head, t.relation);
    const auto [raw_t, filt_t] = rank_target(tail_scores, t.tail, [&](std::size_t e) {
      return known_set.contains(Triple{t.head, e, t.relation});
    });
    acc.add(raw_t, filt_t);
    const auto head_scores = score_heads(t.tail, t.relation);
    const auto [raw_h, filt_h] = rank_target(head_scores, t.head, [&](std::size_t e) {
      return known_set.contains(Triple{e, t.tail, t.relation});
    });
    acc.add(raw_h, filt_h);
  }
  return acc.finish();
}

}  // namespace pagcn
