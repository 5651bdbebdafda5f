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
#include <string>
#include <vector>

#include <json.hpp>

namespace vrdlink {

// Synthetic form layouts:
//   Flat      — key/value rows in one column, values directly right of keys
//   Grouped   — a page header over two side-by-side subheader groups
//   LongValue — keys with tall multi-line values below them
//   Table     — a two-column grid with staggered cells plus table annotations
enum class LayoutFamily { Flat, Grouped, LongValue, Table };

const char* to_string(LayoutFamily family);
LayoutFamily layout_family_from_string(const std::string& s);  // throws UsageError

struct SyntheticOptions {
  std::vector<LayoutFamily> families = {LayoutFamily::Flat, LayoutFamily::Grouped,
                                        LayoutFamily::LongValue, LayoutFamily::Table};
  int count_per_family = 10;
  uint64_t seed = 7;
};

struct SyntheticDoc {
  std::string doc_id;
  nlohmann::json funsd;   // {"form": [...]} with linking on both endpoints
  int width = 0;
  int height = 0;
  nlohmann::json tables;  // annotation array, or null when not applicable
};

// Deterministic: the same options always produce the same documents.
std::vector<SyntheticDoc> generate_corpus(const SyntheticOptions& options);

// Writes `<doc_id>.json`, `<doc_id>.size.json` and, when applicable,
// `<doc_id>.tables.json` into dir (created if missing).
void write_corpus(const std::vector<SyntheticDoc>& docs, const std::filesystem::path& dir);

}  // namespace vrdlink
