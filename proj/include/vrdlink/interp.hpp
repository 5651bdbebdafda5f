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

#include <array>
#include <functional>
#include <set>
#include <utility>
#include <vector>

#include "vrdlink/document.hpp"
#include "vrdlink/dsl.hpp"

namespace vrdlink {

// A (partial) assignment: entity id per variable, relation index per
// relation variable; -1 marks unbound slots.
struct Binding {
  std::array<int32_t, kMaxVarIndex + 1> var_entity;
  std::array<int32_t, kMaxVarIndex + 1> rvar_rel;

  Binding() {
    var_entity.fill(-1);
    rvar_rel.fill(-1);
  }
  int32_t entity(VarId v) const { return var_entity[static_cast<size_t>(v.index)]; }
  int32_t relation(RVarId r) const { return rvar_rel[static_cast<size_t>(r.index)]; }
  friend bool operator==(const Binding& a, const Binding& b) {
    return a.var_entity == b.var_entity && a.rvar_rel == b.rvar_rel;
  }
};

// Deduplicated, sorted set of predicted (src, dst) entity-id pairs.
struct LinkSet {
  std::set<std::pair<int, int>> pairs;

  bool contains(int src, int dst) const { return pairs.count({src, dst}) != 0; }
  size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
  friend bool operator==(const LinkSet& a, const LinkSet& b) { return a.pairs == b.pairs; }
};

LinkSet link_union(const LinkSet& a, const LinkSet& b);
LinkSet link_difference(const LinkSet& a, const LinkSet& b);

// Evaluates a condition under a total binding of its variables; throws
// Error when a referenced variable is unbound or out of range.
bool eval_condition(const Condition& cond, const Binding& binding, const DocumentGraph& graph);

// Reference semantics: full enumeration of |E|^|vars| * |R|^|rvars|
// bindings. Used as the oracle in tests; exponential on purpose.
LinkSet eval_find_naive(const Find& find, const DocumentGraph& graph);

// Join-based evaluation seeded from the Rel atoms of the top-level
// conjunction. Produces exactly the same LinkSet as eval_find_naive.
LinkSet eval_find(const Find& find, const DocumentGraph& graph);

LinkSet eval_program(const Program& program, const DocumentGraph& graph);

// Calls fn for every satisfying total binding, in deterministic order.
void for_each_satisfying_binding(const Find& find, const DocumentGraph& graph,
                                 const std::function<void(const Binding&)>& fn);

// Splits the satisfying bindings of a Find into those whose produced pairs
// are all in the spec (positive) and the rest (negative).
std::pair<std::vector<Binding>, std::vector<Binding>> partition_bindings(const Find& find,
                                                                         const DocumentGraph& graph,
                                                                         const LinkSpec& spec);

}  // namespace vrdlink
