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
#include <optional>
#include <string>
#include <vector>

#include "pagcn/graph.hpp"

namespace pagcn {

// Edge list: "src_id<TAB>dst_id<TAB>weight" per line, no header. Node ids
// are interned in first-appearance order and duplicate edges are summed.
// Without a feature file the features are the identity (m = n). The feature
// CSV has a header row and one row "node_id,v1,...,vm" per node; ids it
// lists that have no edges are added as isolated nodes.
Graph load_graph(const std::filesystem::path& edge_path,
                 const std::optional<std::filesystem::path>& feature_path = {});

// Alignment file: "idA<TAB>idB" per line. Duplicate rows are dropped and
// reported through `warnings` when it is non-null.
Alignment load_alignment(const std::filesystem::path& path,
                         const std::vector<std::string>& ids_a,
                         const std::vector<std::string>& ids_b,
                         double negative_ratio, std::uint64_t seed,
                         std::vector<std::string>* warnings = nullptr);
Alignment load_alignment(const std::filesystem::path& path, const Graph& a,
                         const Graph& b, double negative_ratio,
                         std::uint64_t seed,
                         std::vector<std::string>* warnings = nullptr);

// Triple file: "head<TAB>relation<TAB>tail" per line. Features are identity.
RelationalGraph load_relational(const std::filesystem::path& path);

void write_graph(const std::filesystem::path& path, const Graph& g);
void write_features(const std::filesystem::path& path, const Graph& g);
// Writes the label-1 pairs only.
void write_alignment(const std::filesystem::path& path, const Alignment& alignment,
                     const std::vector<std::string>& ids_a,
                     const std::vector<std::string>& ids_b);
void write_relational(const std::filesystem::path& path, const RelationalGraph& g);

// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// Shortest decimal text that parses back to the same double.
std::string format_real(double value);

}  // namespace pagcn
