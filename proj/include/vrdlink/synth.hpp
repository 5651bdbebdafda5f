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

#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "vrdlink/dsl.hpp"
#include "vrdlink/interp.hpp"

namespace vrdlink {

// ---- Path mining ---------------------------------------------------------

struct PathSignature {
  std::vector<RelationLabel> labels;
  friend bool operator<(const PathSignature& a, const PathSignature& b) {
    if (a.labels.size() != b.labels.size()) return a.labels.size() < b.labels.size();
    return a.labels < b.labels;
  }
  friend bool operator==(const PathSignature& a, const PathSignature& b) {
    return a.labels == b.labels;
  }
};

struct MiningReport {
  std::vector<PathSignature> signatures;      // sorted, deduplicated
  std::map<PathSignature, long long> support; // #(doc, link) pairs exhibiting the signature
  long long total_links = 0;
  long long unreachable_links = 0;            // no path within the length bound
};

// Enumerates simple paths (length <= max_len) between every linked pair and
// collapses them to label signatures across the corpus.
MiningReport mine_paths(const std::vector<DocumentGraph>& graphs,
                        const std::vector<LinkSpec>& specs, int max_len);

// One Find per signature: fresh variable per path node, fresh relation
// variable per edge, a Rel conjunction, returning the last variable.
std::vector<ProgramPtr> initial_programs(const std::vector<PathSignature>& signatures);

// ---- Version space -------------------------------------------------------

struct PairKey {
  int32_t doc = 0;  // index into the corpus
  int32_t src = 0;
  int32_t dst = 0;
  friend bool operator<(const PairKey& a, const PairKey& b) {
    if (a.doc != b.doc) return a.doc < b.doc;
    if (a.src != b.src) return a.src < b.src;
    return a.dst < b.dst;
  }
  friend bool operator==(const PairKey& a, const PairKey& b) {
    return a.doc == b.doc && a.src == b.src && a.dst == b.dst;
  }
};

using PairSet = std::set<PairKey>;

// Satisfying bindings of one entry on one document, packed row-major:
// entity ids for the Find's vars, then relation indices for its rvars.
struct EntryDocRows {
  int32_t doc = 0;
  std::vector<int32_t> data;
};

struct VsEntry {
  Find find;                        // representative program
  std::vector<ProgramPtr> bucket;   // representative first, then merged twins
  std::vector<EntryDocRows> tables;
  PairSet pos;                      // produced pairs that are links
  PairSet neg;                      // produced pairs that are not
};

struct SigKey {
  std::vector<PairKey> pos, neg;
  friend bool operator<(const SigKey& a, const SigKey& b) {
    if (a.pos != b.pos) return a.pos < b.pos;
    return a.neg < b.neg;
  }
};

using VersionSpace = std::map<SigKey, VsEntry>;

// Preprocessed corpus shared by all synthesis stages. Aliases the caller's
// vectors; they must stay alive and unmoved while the SynthCorpus is used.
struct SynthCorpus {
  const std::vector<DocumentGraph>* graphs = nullptr;
  const std::vector<LinkSpec>* specs = nullptr;
  std::vector<std::unordered_set<int64_t>> link_keys;  // (src<<32)|dst per doc
  std::vector<std::map<std::pair<int32_t, int32_t>, std::vector<int32_t>>> rels_by_endpoints;
};

SynthCorpus make_synth_corpus(const std::vector<DocumentGraph>& graphs,
                              const std::vector<LinkSpec>& specs);

struct SynthesisState {
  std::vector<ProgramPtr> pp;  // perfect positives, discovery order
  std::vector<ProgramPtr> np;  // perfect negatives
  PairSet cover;               // everything ever admitted as covered
  PairSet pcover;              // positive pairs produced by pp
  PairSet ncover;              // negative pairs produced by np
  PairSet epcover;             // positive pairs claimed via Exclude emissions
  std::set<std::string> visited;  // canonical program keys already explored
};

VersionSpace create_version_space(const std::vector<ProgramPtr>& programs,
                                  const SynthCorpus& corpus, SynthesisState& state);

struct InsertionRecord {
  double parent_prec = 0.0;
  double child_prec = 0.0;
};

struct RefineOutcome {
  VersionSpace next;
  std::vector<ProgramPtr> pp_new;
  std::vector<ProgramPtr> np_new;
  std::vector<InsertionRecord> insertions;
  bool timed_out = false;
};

using Deadline = std::optional<std::chrono::steady_clock::time_point>;

// One refinement pass per the search procedure: extend entries by one
// candidate atom, harvest perfect programs, insert strictly-improving
// children, then emit mutually exclusive Exclude compositions.
RefineOutcome refine(const VersionSpace& vs, const SynthCorpus& corpus, SynthesisState& state,
                     const Deadline& deadline = std::nullopt);

// ---- Top-level driver ------------------------------------------------------

struct SynthConfig {
  int max_iterations = 3;
  int max_path_len = 2;
  long long min_support = 0;
  double timeout_seconds = 7200.0;
};

struct IterationStats {
  int iteration = 0;
  size_t entries_in = 0;
  size_t entries_out = 0;
  int pp_added = 0;
  int np_added = 0;
  size_t cover_size = 0;
  size_t pcover_size = 0;
  size_t ncover_size = 0;
  std::vector<InsertionRecord> insertions;
};

struct SynthesisResult {
  ProgramPtr final_program;          // Exclude(Union(pp), Union(np)), or Empty
  std::vector<ProgramPtr> positives;
  std::vector<ProgramPtr> negatives;
  MiningReport mining;
  std::vector<IterationStats> iterations;
  long long total_links = 0;
  long long covered_links = 0;
  bool timed_out = false;
};

using ProgressFn = std::function<void(const IterationStats&)>;

// Deterministic end-to-end synthesis: identical inputs yield an identical
// result (including serialization bytes) as long as the time budget is not
// hit mid-run.
SynthesisResult synthesize(const std::vector<DocumentGraph>& graphs,
                           const std::vector<LinkSpec>& specs, const SynthConfig& config = {},
                           const ProgressFn& progress = nullptr);

}  // namespace vrdlink
