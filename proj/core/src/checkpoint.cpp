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

#include "pagcn/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pagcn/errors.hpp"
#include "pagcn/graph_io.hpp"

namespace pagcn {

using nlohmann::json;

const Matrix& Checkpoint::get(const std::string& name) const {
  for (const auto& [key, value] : matrices) {
    if (key == name) return value;
  }
  throw ResolutionError("checkpoint has no matrix named '" + name + "'");
}

std::string serialize_checkpoint(const Checkpoint& checkpoint) {
  json doc;
  doc["format"] = "pagcn-checkpoint";
  doc["version"] = Checkpoint::kVersion;
  doc["metadata"] = checkpoint.metadata;
  json matrices = json::array();
  for (const auto& [name, m] : checkpoint.matrices) {
    matrices.push_back({{"name", name},
                        {"rows", m.rows()},
                        {"cols", m.cols()},
                        {"values", std::vector<double>(m.values().begin(), m.values().end())}});
  }
  doc["matrices"] = std::move(matrices);
  return doc.dump(1) + "\n";
}

Checkpoint parse_checkpoint(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError("checkpoint", 0, e.what());
  }
  if (doc.value("format", "") != "pagcn-checkpoint") {
    throw ParseError("checkpoint", 0, "not a pagcn checkpoint");
  }
  if (doc.value("version", 0) != Checkpoint::kVersion) {
    throw ParseError("checkpoint", 0, "unsupported checkpoint version");
  }
  Checkpoint out;
  try {
    out.metadata = doc.at("metadata").get<std::map<std::string, std::string>>();
    for (const json& entry : doc.at("matrices")) {
      auto values = entry.at("values").get<std::vector<double>>();
      out.matrices.emplace_back(
          entry.at("name").get<std::string>(),
          Matrix(entry.at("rows").get<std::size_t>(), entry.at("cols").get<std::size_t>(),
                 std::move(values)));
    }
  } catch (const json::exception& e) {
    throw ParseError("checkpoint", 0, e.what());
  }
  return out;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  write_file_atomic(path, serialize_checkpoint(checkpoint));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_checkpoint(buffer.str());
}

}  // namespace pagcn
