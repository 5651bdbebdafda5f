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

#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "vrdlink/document.hpp"

namespace vrdlink {

// Variable universes: v0..v10 bind entities, r0..r10 bind relations.
constexpr int kMaxVarIndex = 10;

struct VarId {
  int index = 0;
  friend bool operator==(VarId a, VarId b) { return a.index == b.index; }
  friend bool operator!=(VarId a, VarId b) { return a.index != b.index; }
  friend bool operator<(VarId a, VarId b) { return a.index < b.index; }
};

struct RVarId {
  int index = 0;
  friend bool operator==(RVarId a, RVarId b) { return a.index == b.index; }
  friend bool operator!=(RVarId a, RVarId b) { return a.index != b.index; }
  friend bool operator<(RVarId a, RVarId b) { return a.index < b.index; }
};

// ---- Atomic terms -------------------------------------------------------

// v.label or one of the literals Header/Question/Answer (Other is not a
// literal in the surface language).
struct VLabelTerm {
  bool is_var = true;
  VarId var{};
  EntityLabel lit = EntityLabel::Header;

  static VLabelTerm of(VarId v);
  static VLabelTerm literal(EntityLabel l);  // throws ValidationError on Other
  friend bool operator==(const VLabelTerm& a, const VLabelTerm& b);
};

// r.label or a relation-label literal.
struct RLabelTerm {
  bool is_var = true;
  RVarId rvar{};
  RelationLabel lit = RelationLabel::Top;

  static RLabelTerm of(RVarId r);
  static RLabelTerm literal(RelationLabel l);
  friend bool operator==(const RLabelTerm& a, const RLabelTerm& b);
};

// v.text or one of the string literals "." "/" ":" "-".
struct StrTerm {
  bool is_var = true;
  VarId var{};
  std::string lit;

  static StrTerm text_of(VarId v);
  static StrTerm literal(std::string s);  // throws ValidationError off-grammar
  friend bool operator==(const StrTerm& a, const StrTerm& b);
};

const std::vector<std::string>& str_literals();

enum class Coord : uint8_t { X0 = 0, X1 = 1, Y0 = 2, Y1 = 3 };
const char* to_string(Coord c);
Coord coord_from_string(const std::string& s);

// r.mag, v.{x0,x1,y0,y1}, or a constant from the lattice 0.0, 0.1, ..., 1.0
// (stored as integer tenths so keys and serialization stay exact).
struct FloatTerm {
  enum class Kind : uint8_t { Mag = 0, CoordOf = 1, Const = 2 };
  Kind kind = Kind::Const;
  RVarId rvar{};
  VarId var{};
  Coord coord = Coord::X0;
  int tenths = 0;

  static FloatTerm mag_of(RVarId r);
  static FloatTerm coord_of(VarId v, Coord c);
  static FloatTerm constant(int tenths);  // throws ValidationError outside 0..10
  double value() const { return static_cast<double>(tenths) / 10.0; }
  friend bool operator==(const FloatTerm& a, const FloatTerm& b);
};

// ---- Conditions ---------------------------------------------------------

class Condition;
using ConditionPtr = std::shared_ptr<const Condition>;

struct CondTrue {};
struct CondFalse {};
struct CondAnd {
  ConditionPtr left, right;
};
struct CondNot {
  ConditionPtr arg;
};
// Holds when the relation bound to r runs exactly from v's entity to w's.
struct CondRel {
  VarId v{};
  RVarId r{};
  VarId w{};
};
struct CondVLabelEq {
  VLabelTerm lhs, rhs;
};
struct CondRLabelEq {
  RLabelTerm lhs, rhs;
};
struct CondStrEq {
  StrTerm lhs, rhs;
};
// hay contains needle as a substring.
struct CondStrContains {
  StrTerm hay, needle;
};
struct CondFloatLt {
  FloatTerm lhs, rhs;
};
struct CondFloatGt {
  FloatTerm lhs, rhs;
};

class Condition {
 public:
  using Node = std::variant<CondTrue, CondFalse, CondAnd, CondNot, CondRel, CondVLabelEq,
                            CondRLabelEq, CondStrEq, CondStrContains, CondFloatLt, CondFloatGt>;
  explicit Condition(Node node) : node_(std::move(node)) {}
  const Node& node() const { return node_; }

 private:
  Node node_;
};

ConditionPtr cond_true();
ConditionPtr cond_false();
ConditionPtr cond_and(ConditionPtr left, ConditionPtr right);
ConditionPtr cond_not(ConditionPtr arg);
ConditionPtr cond_rel(VarId v, RVarId r, VarId w);
ConditionPtr cond_vlabel_eq(VLabelTerm lhs, VLabelTerm rhs);
ConditionPtr cond_rlabel_eq(RLabelTerm lhs, RLabelTerm rhs);
ConditionPtr cond_str_eq(StrTerm lhs, StrTerm rhs);
ConditionPtr cond_str_contains(StrTerm hay, StrTerm needle);
ConditionPtr cond_float_lt(FloatTerm lhs, FloatTerm rhs);
ConditionPtr cond_float_gt(FloatTerm lhs, FloatTerm rhs);

// Left-associated conjunction of one or more conjuncts.
ConditionPtr cond_and_all(const std::vector<ConditionPtr>& conjuncts);

bool equal(const Condition& a, const Condition& b);
void collect_vars(const Condition& cond, std::set<VarId>& vars, std::set<RVarId>& rvars);

// ---- Programs -----------------------------------------------------------

class Program;
using ProgramPtr = std::shared_ptr<const Program>;

struct ProgEmpty {};
struct ProgUnion {
  std::vector<ProgramPtr> children;
};
struct ProgExclude {
  ProgramPtr left, right;
};
struct Find {
  std::vector<VarId> vars;      // always contains v0
  std::vector<RVarId> rvars;    // never empty
  ConditionPtr cond;
  std::vector<VarId> returns;   // nonempty subset of vars, excludes v0
};

class Program {
 public:
  using Node = std::variant<ProgEmpty, ProgUnion, ProgExclude, Find>;
  explicit Program(Node node) : node_(std::move(node)) {}
  const Node& node() const { return node_; }

 private:
  Node node_;
};

ProgramPtr make_empty();
ProgramPtr make_union(std::vector<ProgramPtr> children);
ProgramPtr make_exclude(ProgramPtr left, ProgramPtr right);
// Validates the Find well-formedness rules and throws ValidationError.
ProgramPtr make_find(Find find);

bool equal(const Program& a, const Program& b);

// ---- Serialization ------------------------------------------------------

nlohmann::json condition_to_json(const Condition& cond);
ConditionPtr condition_from_json(const nlohmann::json& j);

nlohmann::json program_to_json(const Program& program);
// Parses a program node; errors carry a JSON path such as
// "$.children[1].cond.left". Accepts a missing version (defaults to 1).
ProgramPtr program_from_json(const nlohmann::json& j);

std::string serialize_program(const Program& program);        // deterministic bytes
ProgramPtr parse_program(const std::string& text);            // throws ParseError

// Human-oriented rendering used by `inspect`.
std::string format_condition(const Condition& cond);
std::string format_program(const Program& program);

}  // namespace vrdlink
