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

#include "pagcn/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pagcn/checkpoint.hpp"
#include "pagcn/errors.hpp"
#include "pagcn/graph_io.hpp"
#include "pagcn/metrics.hpp"
#include "pagcn/random.hpp"

namespace pagcn {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string canonical_key(std::string key) {
  key = lower(trim(key));
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  std::uint64_t value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + text + "'");
  }
  return value;
}

double parse_real(const std::string& key, const std::string& text) {
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(value)) {
    throw ConfigError(key + ": expected a finite number, got '" + text + "'");
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = lower(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

DataFiles& files_of(ExperimentConfig& c) {
  if (!c.files) c.files = DataFiles{};
  return *c.files;
}

std::string activation_text(FinalActivation a) {
  return a == FinalActivation::kRowSoftmax ? "softmax" : "identity";
}

const std::vector<std::string>& graph_names() {
  static const std::vector<std::string> names = {"graph_a", "graph_b"};
  return names;
}

double overall_of(const std::vector<double>& values) {
  for (double v : values) {
    if (!(v > 0.0)) return 0.0;
  }
  return harmonic_overall(values);
}

void add_link_metrics(const std::vector<Matrix>& reps, const CrossData& data,
                      std::map<std::string, double>& out) {
  for (SplitPart part : {SplitPart::kValidation, SplitPart::kTest}) {
    const std::string prefix = part == SplitPart::kValidation ? "validation." : "test.";
    std::vector<double> aucs;
    std::vector<double> aps;
    for (std::size_t i = 0; i < data.graphs.size(); ++i) {
      const LinkMetrics m = evaluate_links(reps[i], data.graphs[i], part);
      out[prefix + graph_names()[i] + ".auc"] = m.auc;
      out[prefix + graph_names()[i] + ".ap"] = m.ap;
      aucs.push_back(m.auc);
      aps.push_back(m.ap);
    }
    out[prefix + "overall.auc"] = overall_of(aucs);
    out[prefix + "overall.ap"] = overall_of(aps);
  }
}

void add_relational_metrics(const RelCrossParams& params, const RelCrossData& data,
                            std::map<std::string, double>& out) {
  const std::vector<Matrix> reps = relational_representations(params, data);
  for (SplitPart part : {SplitPart::kValidation, SplitPart::kTest}) {
    const std::string prefix = part == SplitPart::kValidation ? "validation." : "test.";
    std::map<std::string, std::vector<double>> per_metric;
    for (std::size_t i = 0; i < data.graphs.size(); ++i) {
      const RankingMetrics m =
          evaluate_relations(reps[i], params.core(i), data.graphs[i], part, {1, 3});
      const std::map<std::string, double> values = {{"mrr_raw", m.mrr_raw},
                                                    {"mrr_filtered", m.mrr_filtered},
                                                    {"hits1", m.hits_filtered[0]},
                                                    {"hits3", m.hits_filtered[1]}};
      for (const auto& [name, v] : values) {
        out[prefix + graph_names()[i] + "." + name] = v;
        per_metric[name].push_back(v);
      }
    }
    for (const auto& [name, vs] : per_metric) out[prefix + "overall." + name] = overall_of(vs);
  }
}

Checkpoint make_checkpoint(const ParamStore& store, const ExperimentConfig& config,
                           const RunRecord& record) {
  Checkpoint ck;
  ck.metadata["task"] = to_string(config.task);
  ck.metadata["variant"] = to_string(config.variant);
  ck.metadata["seed"] = std::to_string(record.seed);
  ck.metadata["best_epoch"] = std::to_string(record.best_epoch);
  ck.metadata["best_validation"] = format_real(record.best_validation);
  ck.metadata["final_loss"] = format_real(record.final_loss);
  store.append_to(ck);
  return ck;
}

void read_checkpoint_metadata(const Checkpoint& ck, const ExperimentConfig& config,
                              RunRecord& record) {
  auto get = [&](const std::string& key) {
    const auto it = ck.metadata.find(key);
    if (it == ck.metadata.end()) {
      throw ParseError("checkpoint", 0, "metadata lacks '" + key + "'");
    }
    return it->second;
  };
  if (get("task") != to_string(config.task) || get("variant") != to_string(config.variant)) {
    throw ConfigError("checkpoint holds " + get("task") + "/" + get("variant") +
                      " but the configuration asks for " + to_string(config.task) + "/" +
                      to_string(config.variant));
  }
  record.best_epoch = parse_unsigned("best_epoch", get("best_epoch"));
  record.best_validation = parse_real("best_validation", get("best_validation"));
  record.final_loss = parse_real("final_loss", get("final_loss"));
}

RunRecord train_one(const ExperimentConfig& config, std::uint64_t seed,
                    const std::optional<std::filesystem::path>& checkpoint_dir) {
  const ModelConfig model = config.model_config();
  RunRecord record;
  record.seed = seed;
  if (config.task == Task::kLink) {
    const CrossData data = make_link_data(config, seed);
    TrainResult r = train(model, data, seed);
    record.best_epoch = r.best_epoch;
    record.best_validation = r.best_validation;
    record.final_loss = r.loss_trace.empty() ? 0.0 : r.loss_trace.back();
    record.seconds_per_epoch = r.seconds_per_epoch;
    add_link_metrics(representations(r.params, data), data, record.metrics);
    if (checkpoint_dir) {
      save_checkpoint(checkpoint_path(*checkpoint_dir, seed),
                      make_checkpoint(r.params.store, config, record));
    }
  } else {
    const RelCrossData data = make_relational_data(config, seed);
    RelTrainResult r = train_relational(model, data, seed);
    record.best_epoch = r.best_epoch;
    record.best_validation = r.best_validation;
    record.final_loss = r.loss_trace.empty() ? 0.0 : r.loss_trace.back();
    record.seconds_per_epoch = r.seconds_per_epoch;
    add_relational_metrics(r.params, data, record.metrics);
    if (checkpoint_dir) {
      save_checkpoint(checkpoint_path(*checkpoint_dir, seed),
                      make_checkpoint(r.params.store, config, record));
    }
  }
  return record;
}

RunRecord evaluate_one(const ExperimentConfig& config, std::uint64_t seed,
                       const std::filesystem::path& dir) {
  const ModelConfig model = config.model_config();
  const Checkpoint ck = load_checkpoint(checkpoint_path(dir, seed));
  RunRecord record;
  record.seed = seed;
  read_checkpoint_metadata(ck, config, record);
  if (config.task == Task::kLink) {
    const CrossData data = make_link_data(config, seed);
    CrossParams params = build_model(model, data, seed);
    params.store.load_from(ck);
    add_link_metrics(representations(params, data), data, record.metrics);
  } else {
    const RelCrossData data = make_relational_data(config, seed);
    RelCrossParams params = build_relational_model(model, data, seed);
    params.store.load_from(ck);
    add_relational_metrics(params, data, record.metrics);
  }
  return record;
}

MetricsReport assemble(const ExperimentConfig& config, std::vector<RunRecord> runs) {
  MetricsReport report;
  report.task = config.task;
  report.variant = config.variant;
  report.settings = config.settings();
  std::map<std::string, std::vector<double>> columns;
  for (const RunRecord& r : runs) {
    for (const auto& [key, v] : r.metrics) columns[key].push_back(v);
  }
  for (const auto& [key, vs] : columns) report.summary[key] = summarize(vs);
  report.runs = std::move(runs);
  return report;
}

double rounded(double v) { return round_significant(v); }

std::string csv_number(double v) { return format_real(rounded(v)); }

}  // namespace

std::string to_string(Task task) { return task == Task::kLink ? "link" : "relation"; }

Task parse_task(const std::string& text) {
  const std::string t = lower(trim(text));
  if (t == "link") return Task::kLink;
  if (t == "relation") return Task::kRelation;
  throw ConfigError("task must be 'link' or 'relation', got '" + text + "'");
}

std::vector<std::uint64_t> ExperimentConfig::seed_list() const {
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < num_seeds; ++i) out.push_back(seed + i);
  return out;
}

ModelConfig ExperimentConfig::model_config() const {
  ModelConfig c = config_for_variant(variant, dim);
  c.alpha = {alpha_a, 1.0 - alpha_a};
  c.beta = beta;
  if (gamma) {
    c.gamma[{0, 1}] = *gamma;
    c.multi_objective = true;
  }
  c.m_hat = m_hat;
  c.epochs = epochs;
  c.learning_rate = learning_rate;
  c.negatives_per_positive = negatives;
  c.final_activation = final_activation;
  c.reg_rows = reg_rows;
  return c;
}

void ExperimentConfig::set(const std::string& raw_key, const std::string& raw_value) {
  const std::string key = canonical_key(raw_key);
  const std::string value = trim(raw_value);
  // Each setter receives the canonical key for error messages.
  using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;
  static const std::map<std::string, Setter> setters = {
      {"task", [](auto& c, auto&, auto& v) { c.task = parse_task(v); }},
      {"model", [](auto& c, auto&, auto& v) { c.variant = parse_variant(v); }},
      {"dim",
       [](auto& c, auto& k, auto& v) {
         c.dim = parse_unsigned(k, v);
         if (c.dim == 0) throw ConfigError("dim must be >= 1");
       }},
      {"mhat", [](auto& c, auto& k, auto& v) { c.m_hat = parse_unsigned(k, v); }},
      {"alpha_a", [](auto& c, auto& k, auto& v) { c.alpha_a = parse_real(k, v); }},
      {"beta", [](auto& c, auto& k, auto& v) { c.beta = parse_real(k, v); }},
      {"gamma", [](auto& c, auto& k, auto& v) { c.gamma = parse_real(k, v); }},
      {"epochs", [](auto& c, auto& k, auto& v) { c.epochs = parse_unsigned(k, v); }},
      {"lr", [](auto& c, auto& k, auto& v) { c.learning_rate = parse_real(k, v); }},
      {"negatives", [](auto& c, auto& k, auto& v) { c.negatives = parse_unsigned(k, v); }},
      {"activation",
       [](auto& c, auto& k, auto& v) {
         const std::string t = lower(v);
         if (t == "softmax") {
           c.final_activation = FinalActivation::kRowSoftmax;
         } else if (t == "identity") {
           c.final_activation = FinalActivation::kIdentity;
         } else {
           throw ConfigError(k + ": expected softmax or identity, got '" + v + "'");
         }
       }},
      {"reg_rows",
       [](auto& c, auto& k, auto& v) {
         const std::string t = lower(v);
         if (t == "aligned") {
           c.reg_rows = RowScope::kAlignedRows;
         } else if (t == "all") {
           c.reg_rows = RowScope::kAllRows;
         } else {
           throw ConfigError(k + ": expected aligned or all, got '" + v + "'");
         }
       }},
      {"normalization",
       [](auto& c, auto& k, auto& v) {
         const std::string t = lower(v);
         if (t == "negative_half") {
           c.normalization = NormalizationExponent::kNegativeHalf;
         } else if (t == "positive_half") {
           c.normalization = NormalizationExponent::kPositiveHalf;
         } else {
           throw ConfigError(k + ": expected negative_half or positive_half, got '" + v + "'");
         }
       }},
      {"self_loops",
       [](auto& c, auto& k, auto& v) { c.relational.self_loops = parse_bool(k, v); }},
      {"relation_normalization",
       [](auto& c, auto& k, auto& v) {
         const std::string t = lower(v);
         if (t == "per_node") {
           c.relational.normalization = RelNormalization::kPerNode;
         } else if (t == "global") {
           c.relational.normalization = RelNormalization::kGlobal;
         } else {
           throw ConfigError(k + ": expected per_node or global, got '" + v + "'");
         }
       }},
      {"require_equal_schema",
       [](auto& c, auto& k, auto& v) { c.relational.require_equal_schema = parse_bool(k, v); }},
      {"alignment_negative_ratio",
       [](auto& c, auto& k, auto& v) {
         c.alignment_negative_ratio = parse_real(k, v);
         c.synthetic.alignment_negative_ratio = c.alignment_negative_ratio;
       }},
      {"seed", [](auto& c, auto& k, auto& v) { c.seed = parse_unsigned(k, v); }},
      {"seeds",
       [](auto& c, auto& k, auto& v) {
         c.num_seeds = parse_unsigned(k, v);
         if (c.num_seeds == 0) throw ConfigError("seeds must be >= 1");
       }},
      {"blocks", [](auto& c, auto& k, auto& v) { c.synthetic.blocks = parse_unsigned(k, v); }},
      {"nodes_per_block",
       [](auto& c, auto& k, auto& v) { c.synthetic.nodes_per_block = parse_unsigned(k, v); }},
      {"p_intra", [](auto& c, auto& k, auto& v) { c.synthetic.p_intra = parse_real(k, v); }},
      {"p_inter", [](auto& c, auto& k, auto& v) { c.synthetic.p_inter = parse_real(k, v); }},
      {"keep", [](auto& c, auto& k, auto& v) { c.synthetic.keep = parse_real(k, v); }},
      {"rho", [](auto& c, auto& k, auto& v) { c.synthetic.rho = parse_real(k, v); }},
      {"feature_signal",
       [](auto& c, auto& k, auto& v) { c.synthetic.feature_signal = parse_real(k, v); }},
      {"feature_noise",
       [](auto& c, auto& k, auto& v) { c.synthetic.feature_noise = parse_real(k, v); }},
      {"sub_blocks",
       [](auto& c, auto& k, auto& v) { c.synthetic.sub_blocks = parse_unsigned(k, v); }},
      {"sub_contrast",
       [](auto& c, auto& k, auto& v) { c.synthetic.sub_contrast = parse_real(k, v); }},
      {"relations",
       [](auto& c, auto& k, auto& v) { c.synthetic.relations = parse_unsigned(k, v); }},
      {"permute_b",
       [](auto& c, auto& k, auto& v) { c.synthetic.permute_b = parse_bool(k, v); }},
      {"graph_a", [](auto& c, auto&, auto& v) { files_of(c).graph_a = v; }},
      {"graph_b", [](auto& c, auto&, auto& v) { files_of(c).graph_b = v; }},
      {"features_a", [](auto& c, auto&, auto& v) { files_of(c).features_a = v; }},
      {"features_b", [](auto& c, auto&, auto& v) { files_of(c).features_b = v; }},
      {"alignment", [](auto& c, auto&, auto& v) { files_of(c).alignment = v; }},
  };
  const auto it = setters.find(key);
  if (it == setters.end()) throw ConfigError("unknown setting '" + raw_key + "'");
  it->second(*this, key, value);
}

std::map<std::string, std::string> ExperimentConfig::settings() const {
  std::map<std::string, std::string> s;
  s["task"] = to_string(task);
  s["model"] = to_string(variant);
  s["dim"] = std::to_string(dim);
  s["mhat"] = std::to_string(m_hat);
  s["alpha_a"] = format_real(alpha_a);
  s["beta"] = format_real(beta);
  if (gamma) s["gamma"] = format_real(*gamma);
  s["epochs"] = std::to_string(epochs);
  s["lr"] = format_real(learning_rate);
  s["negatives"] = std::to_string(negatives);
  s["activation"] = activation_text(final_activation);
  s["reg_rows"] = reg_rows == RowScope::kAlignedRows ? "aligned" : "all";
  s["normalization"] =
      normalization == NormalizationExponent::kNegativeHalf ? "negative_half" : "positive_half";
  s["self_loops"] = bool_text(relational.self_loops);
  s["relation_normalization"] =
      relational.normalization == RelNormalization::kPerNode ? "per_node" : "global";
  s["require_equal_schema"] = bool_text(relational.require_equal_schema);
  s["alignment_negative_ratio"] = format_real(alignment_negative_ratio);
  s["seed"] = std::to_string(seed);
  s["seeds"] = std::to_string(num_seeds);
  if (files) {
    s["graph_a"] = files->graph_a.string();
    s["graph_b"] = files->graph_b.string();
    if (files->features_a) s["features_a"] = files->features_a->string();
    if (files->features_b) s["features_b"] = files->features_b->string();
    s["alignment"] = files->alignment.string();
  } else {
    s["blocks"] = std::to_string(synthetic.blocks);
    s["nodes_per_block"] = std::to_string(synthetic.nodes_per_block);
    s["p_intra"] = format_real(synthetic.p_intra);
    s["p_inter"] = format_real(synthetic.p_inter);
    s["keep"] = format_real(synthetic.keep);
    s["rho"] = format_real(synthetic.rho);
    s["feature_signal"] = format_real(synthetic.feature_signal);
    s["feature_noise"] = format_real(synthetic.feature_noise);
    s["sub_blocks"] = std::to_string(synthetic.sub_blocks);
    s["sub_contrast"] = format_real(synthetic.sub_contrast);
    s["relations"] = std::to_string(synthetic.relations);
    s["permute_b"] = bool_text(synthetic.permute_b);
  }
  return s;
}

std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text,
                                                                   const std::string& source) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError(source, number, "expected key = value");
    std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw ParseError(source, number, "empty key");
    out.emplace_back(std::move(key), trim(t.substr(eq + 1)));
  }
  return out;
}

void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  for (const auto& [key, value] : parse_config_text(buffer.str(), path.string())) {
    config.set(key, value);
  }
}

CrossData make_link_data(const ExperimentConfig& config, std::uint64_t seed) {
  Graph a;
  Graph b;
  Alignment alignment;
  if (config.files) {
    const DataFiles& f = *config.files;
    a = load_graph(f.graph_a, f.features_a);
    b = load_graph(f.graph_b, f.features_b);
    alignment = load_alignment(f.alignment, a, b, config.alignment_negative_ratio,
                               derive_seed(seed, "alignment"));
  } else {
    SyntheticPairSpec spec = config.synthetic;
    spec.seed = seed;
    SyntheticPair pair = generate_synthetic_pair(spec);
    a = std::move(pair.a);
    b = std::move(pair.b);
    alignment = std::move(pair.alignment);
  }
  CrossData data;
  data.graphs.push_back(prepare_link_task(a, derive_seed(seed, "split", 0), config.normalization));
  data.graphs.push_back(prepare_link_task(b, derive_seed(seed, "split", 1), config.normalization));
  data.alignments.push_back({0, 1, std::move(alignment)});
  return data;
}

RelCrossData make_relational_data(const ExperimentConfig& config, std::uint64_t seed) {
  RelationalGraph a;
  RelationalGraph b;
  Alignment alignment;
  if (config.files) {
    const DataFiles& f = *config.files;
    a = load_relational(f.graph_a);
    b = load_relational(f.graph_b);
    alignment = load_alignment(f.alignment, a.entity_ids, b.entity_ids,
                               config.alignment_negative_ratio, derive_seed(seed, "alignment"));
  } else {
    SyntheticPairSpec spec = config.synthetic;
    spec.seed = seed;
    SyntheticRelationalPair pair = generate_synthetic_relational_pair(spec);
    a = std::move(pair.a);
    b = std::move(pair.b);
    alignment = std::move(pair.alignment);
  }
  RelCrossData data;
  data.options = config.relational;
  data.graphs.push_back(prepare_relational_task(a, derive_seed(seed, "split", 0), data.options));
  data.graphs.push_back(prepare_relational_task(b, derive_seed(seed, "split", 1), data.options));
  data.alignments.push_back({0, 1, std::move(alignment)});
  return data;
}

MetricSummary summarize(const std::vector<double>& values) {
  MetricSummary s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return s;
}

std::filesystem::path checkpoint_path(const std::filesystem::path& dir, std::uint64_t seed) {
  return dir / ("checkpoint_" + std::to_string(seed) + ".json");
}

MetricsReport run_experiment(const ExperimentConfig& config,
                             const std::optional<std::filesystem::path>& checkpoint_dir) {
  if (config.task == Task::kRelation && !supports_relational(config.variant)) {
    throw ConfigError("variant " + to_string(config.variant) +
                      " is not available for the relation task");
  }
  if (checkpoint_dir) std::filesystem::create_directories(*checkpoint_dir);
  std::vector<RunRecord> runs;
  for (std::uint64_t seed : config.seed_list()) {
    runs.push_back(train_one(config, seed, checkpoint_dir));
  }
  return assemble(config, std::move(runs));
}

MetricsReport evaluate_checkpoints(const ExperimentConfig& config,
                                   const std::filesystem::path& checkpoint_dir) {
  std::vector<RunRecord> runs;
  for (std::uint64_t seed : config.seed_list()) {
    runs.push_back(evaluate_one(config, seed, checkpoint_dir));
  }
  return assemble(config, std::move(runs));
}

double round_significant(double value, int digits) {
  if (!std::isfinite(value) || value == 0.0) return value;
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*g", digits, value);
  return std::strtod(buffer, nullptr);
}

std::string report_json(const MetricsReport& report) {
  json doc;
  doc["task"] = to_string(report.task);
  doc["variant"] = to_string(report.variant);
  doc["settings"] = report.settings;
  json runs = json::array();
  for (const RunRecord& r : report.runs) {
    json metrics = json::object();
    for (const auto& [key, v] : r.metrics) metrics[key] = rounded(v);
    runs.push_back({{"seed", r.seed},
                    {"best_epoch", r.best_epoch},
                    {"best_validation", rounded(r.best_validation)},
                    {"final_loss", rounded(r.final_loss)},
                    {"metrics", std::move(metrics)}});
  }
  doc["runs"] = std::move(runs);
  json summary = json::object();
  for (const auto& [key, s] : report.summary) {
    summary[key] = {{"mean", rounded(s.mean)}, {"std", rounded(s.std)}};
  }
  doc["summary"] = std::move(summary);
  return doc.dump(2) + "\n";
}

std::string timing_json(const MetricsReport& report) {
  json doc;
  json runs = json::array();
  std::vector<double> values;
  for (const RunRecord& r : report.runs) {
    runs.push_back({{"seed", r.seed}, {"seconds_per_epoch", rounded(r.seconds_per_epoch)}});
    values.push_back(r.seconds_per_epoch);
  }
  doc["runs"] = std::move(runs);
  doc["mean_seconds_per_epoch"] = rounded(summarize(values).mean);
  return doc.dump(2) + "\n";
}

void write_report(const std::filesystem::path& dir, const MetricsReport& report,
                  bool with_timing) {
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / "report.json", report_json(report));
  if (with_timing) write_file_atomic(dir / "timing.json", timing_json(report));
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config, const std::string& parameter,
                                const std::vector<double>& values) {
  const std::string key = canonical_key(parameter);
  if (key != "alpha_a" && key != "beta" && key != "dim") {
    throw ConfigError("sweep parameter must be alpha_a, beta or dim, got '" + parameter + "'");
  }
  if (values.empty()) throw ConfigError("sweep grid is empty");
  std::vector<SweepRow> rows;
  for (double v : values) {
    ExperimentConfig c = config;
    if (key == "alpha_a") {
      c.alpha_a = v;
    } else if (key == "beta") {
      c.beta = v;
    } else {
      if (!(v >= 1.0) || v != std::floor(v)) {
        throw ConfigError("dim sweep values must be positive integers");
      }
      c.dim = static_cast<std::size_t>(v);
    }
    rows.push_back({key, v, run_experiment(c)});
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::vector<std::string> metrics;
  if (!rows.empty() && rows.front().report.task == Task::kRelation) {
    metrics = {"test.overall.mrr_filtered", "test.overall.mrr_raw", "test.overall.hits1",
               "test.overall.hits3", "validation.overall.mrr_filtered"};
  } else {
    metrics = {"test.overall.auc", "test.overall.ap", "validation.overall.auc",
               "validation.overall.ap"};
  }
  std::ostringstream out;
  out << "parameter,value,runs";
  for (const std::string& m : metrics) {
    std::string column = m;
    std::replace(column.begin(), column.end(), '.', '_');
    out << ',' << column << "_mean," << column << "_std";
  }
  out << '\n';
  for (const SweepRow& row : rows) {
    out << row.parameter << ',' << csv_number(row.value) << ',' << row.report.runs.size();
    for (const std::string& m : metrics) {
      const auto it = row.report.summary.find(m);
      const MetricSummary s = it == row.report.summary.end() ? MetricSummary{} : it->second;
      out << ',' << csv_number(s.mean) << ',' << csv_number(s.std);
    }
    out << '\n';
  }
  return out.str();
}

std::string sweep_timing_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "parameter,value,mean_seconds_per_epoch\n";
  for (const SweepRow& row : rows) {
    std::vector<double> seconds;
    for (const RunRecord& r : row.report.runs) seconds.push_back(r.seconds_per_epoch);
    out << row.parameter << ',' << csv_number(row.value) << ','
        << csv_number(summarize(seconds).mean) << '\n';
  }
  return out.str();
}

std::string positive_transfer_csv(const std::vector<PositiveTransferRow>& rows) {
  std::ostringstream out;
  out << "angle,n,seed,sin_between,sin_error,kappa_b,required_n,in_regime\n";
  for (const PositiveTransferRow& r : rows) {
    out << csv_number(r.angle) << ',' << r.n << ',' << r.seed << ',' << csv_number(r.sin_between)
        << ',' << csv_number(r.sin_error) << ',' << csv_number(r.kappa_b) << ','
        << csv_number(r.required_n) << ',' << (r.in_regime ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string theory_checks_json(const std::vector<TheoryCheck>& checks) {
  json doc;
  json items = json::array();
  bool all = true;
  for (const TheoryCheck& c : checks) {
    items.push_back({{"name", c.check_name},
                     {"expected", c.expected},
                     {"observed", rounded(c.observed)},
                     {"pass", c.pass}});
    all = all && c.pass;
  }
  doc["checks"] = std::move(items);
  doc["all_pass"] = all;
  return doc.dump(2) + "\n";
}

}  // namespace pagcn
