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

// pagcn: command-line front end for data generation, training, evaluation,
// sweeps and the theory checks.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pagcn/errors.hpp"
#include "pagcn/experiment.hpp"
#include "pagcn/graph_io.hpp"
#include "pagcn/synthetic.hpp"
#include "pagcn/theory.hpp"

namespace fs = std::filesystem;

namespace {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kConfig = 3,
  kParse = 4,
  kIo = 5,
  kChecksFailed = 6,
};

struct Options {
  std::optional<std::string> config_file;
  std::string out = "pagcn_out";
  std::optional<std::string> from;
  std::vector<std::string> sets;
  bool timing = false;  // wall-clock sidecars, the only nondeterministic output
  std::string grid = "beta=0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1";
  // Flags that map onto ExperimentConfig keys, in precedence order.
  std::map<std::string, std::string> flags;
};

void report_error(const std::string& kind, const std::string& message) {
  nlohmann::json doc;
  doc["error"] = {{"kind", kind}, {"message", message}};
  std::cerr << doc.dump() << "\n";
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw pagcn::IoError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Config file first, then flags; "out" is handled here rather than by the
// experiment settings.
pagcn::ExperimentConfig resolve(Options& options, const CLI::App& root) {
  pagcn::ExperimentConfig config;
  if (options.config_file) {
    const fs::path path = *options.config_file;
    for (const auto& [key, value] : pagcn::parse_config_text(read_text(path), path.string())) {
      if (key == "out") {
        if (root.get_option("--out")->count() == 0) options.out = value;
        continue;
      }
      config.set(key, value);
    }
  }
  for (const auto& [key, value] : options.flags) config.set(key, value);
  for (const std::string& s : options.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw pagcn::ConfigError("--set expects key=value, got '" + s + "'");
    config.set(s.substr(0, eq), s.substr(eq + 1));
  }
  return config;
}

void print_summary(const pagcn::MetricsReport& report) {
  const std::string metric =
      report.task == pagcn::Task::kLink ? "test.overall.auc" : "test.overall.mrr_filtered";
  const auto it = report.summary.find(metric);
  if (it == report.summary.end()) return;
  std::cout << pagcn::to_string(report.variant) << " " << metric << " mean "
            << pagcn::format_real(pagcn::round_significant(it->second.mean)) << " std "
            << pagcn::format_real(pagcn::round_significant(it->second.std)) << " over "
            << report.runs.size() << " run(s)\n";
}

int cmd_generate(const pagcn::ExperimentConfig& config, const fs::path& out) {
  fs::create_directories(out);
  pagcn::SyntheticPairSpec spec = config.synthetic;
  spec.seed = config.seed;
  std::ostringstream data_conf;
  data_conf << "# generated with seed " << config.seed << "\n";
  data_conf << "task = " << pagcn::to_string(config.task) << "\n";
  if (config.task == pagcn::Task::kLink) {
    const pagcn::SyntheticPair pair = pagcn::generate_synthetic_pair(spec);
    pagcn::write_graph(out / "graph_a.tsv", pair.a);
    pagcn::write_graph(out / "graph_b.tsv", pair.b);
    pagcn::write_features(out / "features_a.csv", pair.a);
    pagcn::write_features(out / "features_b.csv", pair.b);
    pagcn::write_alignment(out / "alignment.tsv", pair.alignment, pair.a.node_ids,
                           pair.b.node_ids);
    data_conf << "graph_a = " << (out / "graph_a.tsv").string() << "\n"
              << "graph_b = " << (out / "graph_b.tsv").string() << "\n"
              << "features_a = " << (out / "features_a.csv").string() << "\n"
              << "features_b = " << (out / "features_b.csv").string() << "\n";
    nlohmann::json truth;
    truth["block"] = pair.block;
    truth["community"] = pair.community;
    truth["b_to_world"] = pair.b_to_world;
    pagcn::write_file_atomic(out / "ground_truth.json", truth.dump() + "\n");
  } else {
    const pagcn::SyntheticRelationalPair pair = pagcn::generate_synthetic_relational_pair(spec);
    pagcn::write_relational(out / "triples_a.tsv", pair.a);
    pagcn::write_relational(out / "triples_b.tsv", pair.b);
    pagcn::write_alignment(out / "alignment.tsv", pair.alignment, pair.a.entity_ids,
                           pair.b.entity_ids);
    data_conf << "graph_a = " << (out / "triples_a.tsv").string() << "\n"
              << "graph_b = " << (out / "triples_b.tsv").string() << "\n";
    nlohmann::json truth;
    truth["block"] = pair.block;
    truth["b_to_world"] = pair.b_to_world;
    pagcn::write_file_atomic(out / "ground_truth.json", truth.dump() + "\n");
  }
  data_conf << "alignment = " << (out / "alignment.tsv").string() << "\n";
  pagcn::write_file_atomic(out / "data.conf", data_conf.str());
  std::cout << "wrote synthetic " << pagcn::to_string(config.task) << " pair to "
            << out.string() << "\n";
  return kOk;
}

int cmd_train(const pagcn::ExperimentConfig& config, const fs::path& out, bool timing) {
  const pagcn::MetricsReport report = pagcn::run_experiment(config, out);
  pagcn::write_report(out, report, timing);
  print_summary(report);
  return kOk;
}

int cmd_evaluate(const pagcn::ExperimentConfig& config, const fs::path& out,
                 const fs::path& from) {
  const pagcn::MetricsReport report = pagcn::evaluate_checkpoints(config, from);
  fs::create_directories(out);
  pagcn::write_file_atomic(out / "evaluation.json", pagcn::report_json(report));
  print_summary(report);
  return kOk;
}

int cmd_sweep(const pagcn::ExperimentConfig& config, const fs::path& out,
              const std::string& grid, bool timing) {
  const auto eq = grid.find('=');
  if (eq == std::string::npos) throw pagcn::ConfigError("--grid expects key=v1,v2,...");
  const std::string key = grid.substr(0, eq);
  std::vector<double> values;
  std::stringstream list(grid.substr(eq + 1));
  std::string item;
  while (std::getline(list, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end != item.c_str() + item.size()) {
      throw pagcn::ConfigError("--grid value '" + item + "' is not a number");
    }
    values.push_back(v);
  }
  const std::vector<pagcn::SweepRow> rows = pagcn::run_sweep(config, key, values);
  fs::create_directories(out);
  pagcn::write_file_atomic(out / "sweep.csv", pagcn::sweep_csv(rows));
  if (timing) pagcn::write_file_atomic(out / "sweep_timing.csv", pagcn::sweep_timing_csv(rows));
  std::cout << "wrote " << rows.size() << " sweep rows to " << (out / "sweep.csv").string()
            << "\n";
  return kOk;
}

int cmd_theory(const pagcn::ExperimentConfig& config, const fs::path& out) {
  const std::vector<pagcn::TheoryCheck> checks = pagcn::run_theory_checks(config.seed);
  const std::vector<pagcn::PositiveTransferRow> rows =
      pagcn::positive_transfer_experiment(config.seed);
  fs::create_directories(out);
  pagcn::write_file_atomic(out / "theory_checks.json", pagcn::theory_checks_json(checks));
  pagcn::write_file_atomic(out / "positive_transfer.csv", pagcn::positive_transfer_csv(rows));
  bool all = true;
  for (const pagcn::TheoryCheck& c : checks) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.check_name << " observed "
              << pagcn::format_real(pagcn::round_significant(c.observed)) << " expected "
              << c.expected << "\n";
    all = all && c.pass;
  }
  if (!all) {
    report_error("theory_check", "one or more theory checks failed");
    return kChecksFailed;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-network GCN training, evaluation and theory checks"};
  app.require_subcommand(1);
  app.fallthrough();
  Options options;

  app.add_option("--config", options.config_file, "key = value settings file")
      ->check(CLI::ExistingFile);
  app.add_option("--out", options.out, "output directory");
  auto flag = [&](const std::string& name, const std::string& key, const std::string& help) {
    app.add_option_function<std::string>(
        name, [&options, key](const std::string& v) { options.flags[key] = v; }, help);
  };
  flag("--seed", "seed", "base seed");
  flag("--seeds", "seeds", "number of seeds (seed, seed + 1, ...)");
  flag("--task", "task", "link or relation");
  flag("--model", "model", "separated or m1..m13");
  flag("--alpha-a", "alpha_a", "weight of graph A (graph B gets 1 - alpha_a)");
  flag("--beta", "beta", "alignment weight");
  flag("--gamma", "gamma", "per-pair alignment weight; selects the multi-graph objective");
  flag("--dim", "dim", "representation dimension d");
  flag("--mhat", "mhat", "transformed feature dimension (0 = min feature dimension)");
  flag("--epochs", "epochs", "training epochs (per phase when pretraining)");
  flag("--lr", "lr", "Adam learning rate");
  app.add_flag("--timing", options.timing,
               "also write seconds per epoch (timing.json, sweep_timing.csv)");
  app.add_option("--set", options.sets, "any other setting as key=value (repeatable)");

  auto* generate = app.add_subcommand("generate", "write a synthetic pair as TSV files");
  auto* train = app.add_subcommand("train", "train every seed, save checkpoints and a report");
  auto* evaluate = app.add_subcommand("evaluate", "evaluate saved checkpoints");
  evaluate->add_option("--from", options.from, "checkpoint directory (default: --out)");
  auto* sweep = app.add_subcommand("sweep", "grid over alpha_a, beta or dim");
  sweep->add_option("--grid", options.grid, "key=v1,v2,... with key in alpha_a, beta, dim");
  auto* theory = app.add_subcommand("theory-check", "closed-form and transfer checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("usage", e.what());
    return kUsage;
  }

  try {
    const pagcn::ExperimentConfig config = resolve(options, app);
    const fs::path out = options.out;
    if (generate->parsed()) return cmd_generate(config, out);
    if (train->parsed()) return cmd_train(config, out, options.timing);
    if (evaluate->parsed()) return cmd_evaluate(config, out, options.from.value_or(options.out));
    if (sweep->parsed()) return cmd_sweep(config, out, options.grid, options.timing);
    if (theory->parsed()) return cmd_theory(config, out);
  } catch (const pagcn::ConfigError& e) {
    report_error(e.kind(), e.what());
    return kConfig;
  } catch (const pagcn::ParseError& e) {
    report_error(e.kind(), e.what());
    return kParse;
  } catch (const pagcn::IoError& e) {
    report_error(e.kind(), e.what());
    return kIo;
  } catch (const pagcn::Error& e) {
    report_error(e.kind(), e.what());
    return kFailure;
  } catch (const std::exception& e) {
    report_error("internal", e.what());
    return kFailure;
  }
  return kUsage;
}
