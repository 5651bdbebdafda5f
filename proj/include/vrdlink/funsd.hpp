// Copyright 2026 The vrdlink Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vrdlink/document.hpp"

namespace vrdlink {

// Raw per-document loader output: normalized entities plus optional table
// annotations, before any relation graph is built.
struct Document {
  std::string doc_id;
  std::vector<Entity> entities;
  std::vector<TableCell> tables;  // empty when no annotation file applies
};

struct CorpusOptions {
  GraphConfig graph;
  // Fallback page size when a document has no `<stem>.size.json` sidecar.
  std::optional<int> default_width;
  std::optional<int> default_height;
  // Apply `<stem>.tables.json` annotations when present.
  bool use_tables = true;
};

struct Corpus {
  std::vector<DocumentGraph> graphs;
  std::vector<LinkSpec> specs;
};

// Reads every FUNSD-format `*.json` in `dir` (skipping `*.size.json` and
// `*.tables.json` sidecars) in filename order. Throws DataError naming the
// offending file on any malformed input.
std::pair<std::vector<Document>, std::vector<LinkSpec>> load_funsd(
    const std::filesystem::path& dir, const CorpusOptions& options = {});

// load_funsd + build_graph (+ table relations) in one step.
Corpus load_corpus(const std::filesystem::path& dir, const CorpusOptions& options = {});

// Stable content fingerprint of a corpus (FNV-1a over entities and links).
std::string corpus_fingerprint(const Corpus& corpus);

}  // namespace vrdlink
