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

#include "pagcn/graph_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "pagcn/errors.hpp"

namespace pagcn {
namespace {

namespace fs = std::filesystem;

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

std::optional<double> parse_real(const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

class Interner {
 public:
  std::size_t intern(const std::string& id) {
    auto [it, inserted] = index_.try_emplace(id, ids_.size());
    if (inserted) ids_.push_back(id);
    return it->second;
  }
  std::vector<std::string> take() { return std::move(ids_); }

 private:
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> ids_;
};

std::unordered_map<std::string, std::size_t> index_ids(
    const std::vector<std::string>& ids) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], i);
  return index;
}

// Rows for ids missing from the edge list become isolated nodes, appended
// in file order.
Matrix load_features(const fs::path& path, std::vector<std::string>& ids) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw ParseError(path.string(), 1, "missing header row");
  const std::size_t width = split(lines[0], ',').size();
  if (width < 2) throw ParseError(path.string(), 1, "header needs id and >= 1 feature column");
  auto index = index_ids(ids);
  std::vector<std::pair<std::size_t, std::vector<double>>> rows;
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    const auto fields = split(lines[ln], ',');
    if (fields.size() != width) {
      throw ParseError(path.string(), ln + 1,
                       "expected " + std::to_string(width) + " fields");
    }
    if (fields[0].empty()) throw ParseError(path.string(), ln + 1, "empty node id");
    std::vector<double> values;
    for (std::size_t c = 1; c < width; ++c) {
      const auto v = parse_real(fields[c]);
      if (!v) throw ParseError(path.string(), ln + 1, "bad number '" + fields[c] + "'");
      values.push_back(*v);
    }
    auto [it, added] = index.emplace(fields[0], ids.size());
    if (added) ids.push_back(fields[0]);
    rows.push_back({it->second, std::move(values)});
  }
  Matrix features(ids.size(), width - 1);
  std::vector<bool> seen(ids.size(), false);
  for (const auto& [node, values] : rows) {
    if (seen[node]) throw ContractError(path.string() + ": duplicate row for '" + ids[node] + "'");
    seen[node] = true;
    for (std::size_t c = 0; c < values.size(); ++c) features(node, c) = values[c];
  }
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!seen[i]) throw ContractError("no feature row for node '" + ids[i] + "'");
  }
  return features;
}

}  // namespace

std::string format_real(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

Graph load_graph(const fs::path& edge_path,
                 const std::optional<fs::path>& feature_path) {
  const std::vector<std::string> lines = read_lines(edge_path);
  Interner interner;
  std::vector<WeightedLink> links;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    const auto fields = split(lines[ln], '\t');
    if (fields.size() != 3) {
      throw ParseError(edge_path.string(), ln + 1,
                       "expected src<TAB>dst<TAB>weight, got " +
                           std::to_string(fields.size()) + " fields");
    }
    if (fields[0].empty() || fields[1].empty()) {
      throw ParseError(edge_path.string(), ln + 1, "empty node id");
    }
    const auto weight = parse_real(fields[2]);
    if (!weight || !std::isfinite(*weight)) {
      throw ParseError(edge_path.string(), ln + 1, "bad weight '" + fields[2] + "'");
    }
    if (*weight < 0.0) {
      throw ContractError(edge_path.string() + ":" + std::to_string(ln + 1) +
                          ": negative weight");
    }
    if (fields[0] == fields[1]) {
      throw ParseError(edge_path.string(), ln + 1, "self-loop edge");
    }
    const std::size_t i = interner.intern(fields[0]);
    const std::size_t j = interner.intern(fields[1]);
    links.push_back({i, j, *weight});
  }
  std::vector<std::string> ids = interner.take();
  if (ids.empty()) throw ContractError("empty graph: " + edge_path.string());
  Matrix features = feature_path ? load_features(*feature_path, ids) : Matrix::identity(ids.size());
  const std::size_t n = ids.size();
  Graph g = Graph::from_links(n, links, std::move(features), std::move(ids));
  g.validate();
  return g;
}

Alignment load_alignment(const fs::path& path, const std::vector<std::string>& ids_a,
                         const std::vector<std::string>& ids_b,
                         double negative_ratio, std::uint64_t seed,
                         std::vector<std::string>* warnings) {
  const auto index_a = index_ids(ids_a);
  const auto index_b = index_ids(ids_b);
  Alignment alignment{ids_a.size(), ids_b.size(), {}};
  std::set<std::pair<std::size_t, std::size_t>> seen;
  const std::vector<std::string> lines = read_lines(path);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    const auto fields = split(lines[ln], '\t');
    if (fields.size() != 2) {
      throw ParseError(path.string(), ln + 1, "expected idA<TAB>idB");
    }
    auto a = index_a.find(fields[0]);
    if (a == index_a.end()) {
      throw ResolutionError(path.string() + ":" + std::to_string(ln + 1) +
                            ": id '" + fields[0] + "' not found in graph A");
    }
    auto b = index_b.find(fields[1]);
    if (b == index_b.end()) {
      throw ResolutionError(path.string() + ":" + std::to_string(ln + 1) +
                            ": id '" + fields[1] + "' not found in graph B");
    }
    if (!seen.insert({a->second, b->second}).second) {
      if (warnings) {
        warnings->push_back(path.string() + ":" + std::to_string(ln + 1) +
                            ": duplicate alignment row dropped");
      }
      continue;
    }
    alignment.pairs.push_back({a->second, b->second, 1});
  }
  add_alignment_negatives(alignment, negative_ratio, seed);
  return alignment;
}

Alignment load_alignment(const fs::path& path, const Graph& a, const Graph& b,
                         double negative_ratio, std::uint64_t seed,
                         std::vector<std::string>* warnings) {
  return load_alignment(path, a.node_ids, b.node_ids, negative_ratio, seed, warnings);
}

RelationalGraph load_relational(const fs::path& path) {
  const std::vector<std::string> lines = read_lines(path);
  Interner entities;
  Interner relations;
  std::set<Triple> seen;
  RelationalGraph g;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    const auto fields = split(lines[ln], '\t');
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty() ||
        fields[2].empty()) {
      throw ParseError(path.string(), ln + 1, "expected head<TAB>relation<TAB>tail");
    }
    const std::size_t head = entities.intern(fields[0]);
    const std::size_t relation = relations.intern(fields[1]);
    const std::size_t tail = entities.intern(fields[2]);
    const Triple t{head, tail, relation};
    if (seen.insert(t).second) g.triples.push_back(t);
  }
  g.entity_ids = entities.take();
  g.relation_names = relations.take();
  if (g.entity_ids.empty()) throw ContractError("empty relational graph: " + path.string());
  g.num_entities = g.entity_ids.size();
  g.num_relations = g.relation_names.size();
  g.features = Matrix::identity(g.num_entities);
  return g;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

void write_graph(const fs::path& path, const Graph& g) {
  std::ostringstream out;
  for (const WeightedLink& l : upper_links(g)) {
    out << g.node_ids.at(l.i) << '\t' << g.node_ids.at(l.j) << '\t'
        << format_real(l.weight) << '\n';
  }
  write_file_atomic(path, out.str());
}

void write_features(const fs::path& path, const Graph& g) {
  std::ostringstream out;
  out << "id";
  for (std::size_t c = 0; c < g.num_features(); ++c) out << ",f" << c;
  out << '\n';
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    out << g.node_ids.at(i);
    for (double v : g.features.row(i)) out << ',' << format_real(v);
    out << '\n';
  }
  write_file_atomic(path, out.str());
}

void write_alignment(const fs::path& path, const Alignment& alignment,
                     const std::vector<std::string>& ids_a,
                     const std::vector<std::string>& ids_b) {
  std::ostringstream out;
  for (const AlignedPair& p : alignment.pairs) {
    if (p.label == 1) out << ids_a.at(p.a) << '\t' << ids_b.at(p.b) << '\n';
  }
  write_file_atomic(path, out.str());
}

void write_relational(const fs::path& path, const RelationalGraph& g) {
  std::ostringstream out;
  for (const Triple& t : g.triples) {
    out << g.entity_ids.at(t.head) << '\t' << g.relation_names.at(t.relation)
        << '\t' << g.entity_ids.at(t.tail) << '\n';
  }
  write_file_atomic(path, out.str());
}

}  // namespace pagcn
