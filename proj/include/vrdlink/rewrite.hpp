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

#include <string>

#include "vrdlink/dsl.hpp"

namespace vrdlink {

// Semantics-preserving bottom-up simplification. One application reaches a
// normal form (rewrite is idempotent). Rules:
//   And(A, A) -> A              And(A, False)/And(False, A) -> False
//   And(A, True)/And(True, A) -> A
//   Lt(F, F) -> False           Gt(F, F) -> False
//   Contains(S, S) -> True      StrEq(S, S) -> True
//   VLabelEq(t, t) -> True      RLabelEq(t, t) -> True
//   Lt(v.x0, v.x1) -> True      Lt(v.x1, v.x0) -> False   (same for y, and
//                                                          mirrored for Gt)
// plus constant folding of ground atoms (two literals) and Not(True/False).
ConditionPtr rewrite(const ConditionPtr& cond);

// Stable identity for equivalence reduction: rewrites, flattens nested
// conjunctions into a sorted, deduplicated conjunct list, and serializes
// compactly. Conditions differing only in conjunct order or duplication
// share a key.
std::string canonical_key(const Condition& cond);

// Key over the whole Find shape (vars, rvars, returns, canonical condition).
std::string program_key(const Find& find);

}  // namespace vrdlink
