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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pagcn/cross_net.hpp"
#include "pagcn/relational.hpp"
#include "pagcn/synthetic.hpp"
#include "pagcn/theory.hpp"

namespace pagcn {

enum class Task { kLink, kRelation };

std::string to_string(Task task);
Task parse_task(const std::string& text);

// Input files for the two-graph experiments. The link task reads edge lists
// (and optional feature CSVs); the relation task reads triple files.
struct DataFiles {
  std::filesystem::path graph_a;
  std::filesystem::path graph_b;
  std::optional<std::filesystem::path> features_a;
  std::optional<std::filesystem::path> features_b;
  std::filesystem::path alignment;
};

// Everything a run needs. Settings are addressed by the same keys in config
// files and on the command line (see set()).
struct ExperimentConfig {
  Task task = Task::kLink;
  VariantId variant = VariantId::kM13;
  std::size_t dim = 64;
  std::size_t m_hat = 0;
  double alpha_a = 0.5;
  double beta = 0.5;
  std::optional<double> gamma;  // selects the gamma-weighted objective
  std::size_t epochs = 200;
  double learning_rate = 0.01;
  std::size_t negatives = 1;
  FinalActivation final_activation = FinalActivation::kRowSoftmax;
  RowScope reg_rows = RowScope::kAlignedRows;
  NormalizationExponent normalization = NormalizationExponent::kNegativeHalf;
  RelOptions relational;
  double alignment_negative_ratio = 1.0;  // file data only

  std::uint64_t seed = 0;
  std::size_t num_seeds = 1;

  // Synthetic data is regenerated per run with spec.seed = run seed.
  SyntheticPairSpec synthetic;
  std::optional<DataFiles> files;

  // seed, seed + 1, ..., seed + num_seeds - 1.
  std::vector<std::uint64_t> seed_list() const;
  ModelConfig model_config() const;

  // Throws ConfigError for unknown keys or malformed values.
  void set(const std::string& key, const std::string& value);
  // Canonical key=value view of every setting, in key order.
  std::map<std::string, std::string> settings() const;
};

// "key = value" lines; blank lines and lines starting with '#' are skipped.
// Throws ParseError naming the line.
std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text,
                                                                   const std::string& source);
void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path);

CrossData make_link_data(const ExperimentConfig& config, std::uint64_t seed);
RelCrossData make_relational_data(const ExperimentConfig& config, std::uint64_t seed);

// One training run. Metric keys read "<part>.<graph>.<metric>" with part in
// {validation, test}, graph in {graph_a, graph_b, overall} and metric in
// {auc, ap} (link) or {mrr_raw, mrr_filtered, hits1, hits3} (relation).
struct RunRecord {
  std::uint64_t seed = 0;
  std::size_t best_epoch = 0;
  double best_validation = 0.0;
  double final_loss = 0.0;
  std::map<std::string, double> metrics;
  double seconds_per_epoch = 0.0;  // reported in the timing sidecar only
};

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single run
};

struct MetricsReport {
  Task task = Task::kLink;
  VariantId variant = VariantId::kSeparated;
  std::map<std::string, std::string> settings;
  std::vector<RunRecord> runs;
  std::map<std::string, MetricSummary> summary;
};

MetricSummary summarize(const std::vector<double>& values);

// Trains every seed, evaluates the best-validation parameters and, when
// `checkpoint_dir` is set, saves them as checkpoint_<seed>.json there.
MetricsReport run_experiment(const ExperimentConfig& config,
                             const std::optional<std::filesystem::path>& checkpoint_dir = {});

// Rebuilds each seed's data, loads its checkpoint and evaluates it.
MetricsReport evaluate_checkpoints(const ExperimentConfig& config,
                                   const std::filesystem::path& checkpoint_dir);

std::filesystem::path checkpoint_path(const std::filesystem::path& dir, std::uint64_t seed);

// Numbers are rounded to 6 significant digits.
double round_significant(double value, int digits = 6);
std::string report_json(const MetricsReport& report);
std::string timing_json(const MetricsReport& report);
// report.json, plus timing.json when asked; each written atomically. Only
// timing.json varies between identical runs.
void write_report(const std::filesystem::path& dir, const MetricsReport& report,
                  bool with_timing = false);

struct SweepRow {
  std::string parameter;
  double value = 0.0;
  MetricsReport report;
};

// Keys "alpha_a", "beta" or "dim".
std::vector<SweepRow> run_sweep(const ExperimentConfig& config, const std::string& parameter,
                                const std::vector<double>& values);
std::string sweep_csv(const std::vector<SweepRow>& rows);
// Wall-clock seconds per epoch, kept apart so sweep_csv is reproducible.
std::string sweep_timing_csv(const std::vector<SweepRow>& rows);

std::string positive_transfer_csv(const std::vector<PositiveTransferRow>& rows);
std::string theory_checks_json(const std::vector<TheoryCheck>& checks);

}  // namespace pagcn
