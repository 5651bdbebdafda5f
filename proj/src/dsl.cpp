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

#include "vrdlink/dsl.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vrdlink/errors.hpp"

namespace vrdlink {

namespace {

void check_var_index(int index, const char* what) {
  if (index < 0 || index > kMaxVarIndex) {
    throw ValidationError(std::string(what) + std::to_string(index) + " is outside the grammar (0.." +
                          std::to_string(kMaxVarIndex) + ")");
  }
}

}  // namespace

// ---- Terms --------------------------------------------------------------

VLabelTerm VLabelTerm::of(VarId v) {
  check_var_index(v.index, "v");
  VLabelTerm t;
  t.is_var = true;
  t.var = v;
  return t;
}

VLabelTerm VLabelTerm::literal(EntityLabel l) {
  if (l == EntityLabel::Other) {
    throw ValidationError("'other' is not an entity-label literal of the language");
  }
  VLabelTerm t;
  t.is_var = false;
  t.lit = l;
  return t;
}

bool operator==(const VLabelTerm& a, const VLabelTerm& b) {
  if (a.is_var != b.is_var) return false;
  return a.is_var ? a.var == b.var : a.lit == b.lit;
}

RLabelTerm RLabelTerm::of(RVarId r) {
  check_var_index(r.index, "r");
  RLabelTerm t;
  t.is_var = true;
  t.rvar = r;
  return t;
}

RLabelTerm RLabelTerm::literal(RelationLabel l) {
  RLabelTerm t;
  t.is_var = false;
  t.lit = l;
  return t;
}

bool operator==(const RLabelTerm& a, const RLabelTerm& b) {
  if (a.is_var != b.is_var) return false;
  return a.is_var ? a.rvar == b.rvar : a.lit == b.lit;
}

const std::vector<std::string>& str_literals() {
  static const std::vector<std::string> kLiterals = {".", "/", ":", "-"};
  return kLiterals;
}

StrTerm StrTerm::text_of(VarId v) {
  check_var_index(v.index, "v");
  StrTerm t;
  t.is_var = true;
  t.var = v;
  return t;
}

StrTerm StrTerm::literal(std::string s) {
  const auto& lits = str_literals();
  if (std::find(lits.begin(), lits.end(), s) == lits.end()) {
    throw ValidationError("string literal '" + s + "' is outside the grammar");
  }
  StrTerm t;
  t.is_var = false;
  t.lit = std::move(s);
  return t;
}

bool operator==(const StrTerm& a, const StrTerm& b) {
  if (a.is_var != b.is_var) return false;
  return a.is_var ? a.var == b.var : a.lit == b.lit;
}

const char* to_string(Coord c) {
  switch (c) {
    case Coord::X0:
      return "x0";
    case Coord::X1:
      return "x1";
    case Coord::Y0:
      return "y0";
    case Coord::Y1:
      return "y1";
  }
  return "x0";
}

Coord coord_from_string(const std::string& s) {
  if (s == "x0") return Coord::X0;
  if (s == "x1") return Coord::X1;
  if (s == "y0") return Coord::Y0;
  if (s == "y1") return Coord::Y1;
  throw ParseError("unknown coordinate '" + s + "'");
}

FloatTerm FloatTerm::mag_of(RVarId r) {
  check_var_index(r.index, "r");
  FloatTerm t;
  t.kind = Kind::Mag;
  t.rvar = r;
  return t;
}

FloatTerm FloatTerm::coord_of(VarId v, Coord c) {
  check_var_index(v.index, "v");
  FloatTerm t;
  t.kind = Kind::CoordOf;
  t.var = v;
  t.coord = c;
  return t;
}

FloatTerm FloatTerm::constant(int tenths) {
  if (tenths < 0 || tenths > 10) {
    throw ValidationError("float constants form the lattice 0.0, 0.1, ..., 1.0");
  }
  FloatTerm t;
  t.kind = Kind::Const;
  t.tenths = tenths;
  return t;
}

bool operator==(const FloatTerm& a, const FloatTerm& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case FloatTerm::Kind::Mag:
      return a.rvar == b.rvar;
    case FloatTerm::Kind::CoordOf:
      return a.var == b.var && a.coord == b.coord;
    case FloatTerm::Kind::Const:
      return a.tenths == b.tenths;
  }
  return false;
}

// ---- Condition builders -------------------------------------------------

ConditionPtr cond_true() { return std::make_shared<Condition>(Condition::Node{CondTrue{}}); }
ConditionPtr cond_false() { return std::make_shared<Condition>(Condition::Node{CondFalse{}}); }

ConditionPtr cond_and(ConditionPtr left, ConditionPtr right) {
  if (!left || !right) throw ValidationError("And needs two conditions");
  return std::make_shared<Condition>(Condition::Node{CondAnd{std::move(left), std::move(right)}});
}

ConditionPtr cond_not(ConditionPtr arg) {
  if (!arg) throw ValidationError("Not needs a condition");
  return std::make_shared<Condition>(Condition::Node{CondNot{std::move(arg)}});
}

ConditionPtr cond_rel(VarId v, RVarId r, VarId w) {
  check_var_index(v.index, "v");
  check_var_index(r.index, "r");
  check_var_index(w.index, "v");
  return std::make_shared<Condition>(Condition::Node{CondRel{v, r, w}});
}

ConditionPtr cond_vlabel_eq(VLabelTerm lhs, VLabelTerm rhs) {
  return std::make_shared<Condition>(Condition::Node{CondVLabelEq{lhs, rhs}});
}

ConditionPtr cond_rlabel_eq(RLabelTerm lhs, RLabelTerm rhs) {
  return std::make_shared<Condition>(Condition::Node{CondRLabelEq{lhs, rhs}});
}

ConditionPtr cond_str_eq(StrTerm lhs, StrTerm rhs) {
  return std::make_shared<Condition>(Condition::Node{CondStrEq{std::move(lhs), std::move(rhs)}});
}

ConditionPtr cond_str_contains(StrTerm hay, StrTerm needle) {
  return std::make_shared<Condition>(
      Condition::Node{CondStrContains{std::move(hay), std::move(needle)}});
}

ConditionPtr cond_float_lt(FloatTerm lhs, FloatTerm rhs) {
  return std::make_shared<Condition>(Condition::Node{CondFloatLt{lhs, rhs}});
}

ConditionPtr cond_float_gt(FloatTerm lhs, FloatTerm rhs) {
  return std::make_shared<Condition>(Condition::Node{CondFloatGt{lhs, rhs}});
}

ConditionPtr cond_and_all(const std::vector<ConditionPtr>& conjuncts) {
  if (conjuncts.empty()) throw ValidationError("cond_and_all needs at least one conjunct");
  ConditionPtr acc = conjuncts.front();
  for (size_t i = 1; i < conjuncts.size(); ++i) acc = cond_and(acc, conjuncts[i]);
  return acc;
}

// ---- Structural equality ------------------------------------------------

bool equal(const Condition& a, const Condition& b) {
  if (a.node().index() != b.node().index()) return false;
  return std::visit(
      [&b](const auto& lhs) -> bool {
        using T = std::decay_t<decltype(lhs)>;
        const auto& rhs = std::get<T>(b.node());
        if constexpr (std::is_same_v<T, CondTrue> || std::is_same_v<T, CondFalse>) {
          return true;
        } else if constexpr (std::is_same_v<T, CondAnd>) {
          return equal(*lhs.left, *rhs.left) && equal(*lhs.right, *rhs.right);
        } else if constexpr (std::is_same_v<T, CondNot>) {
          return equal(*lhs.arg, *rhs.arg);
        } else if constexpr (std::is_same_v<T, CondRel>) {
          return lhs.v == rhs.v && lhs.r == rhs.r && lhs.w == rhs.w;
        } else if constexpr (std::is_same_v<T, CondVLabelEq>) {
          return lhs.lhs == rhs.lhs && lhs.rhs == rhs.rhs;
        } else if constexpr (std::is_same_v<T, CondRLabelEq>) {
          return lhs.lhs == rhs.lhs && lhs.rhs == rhs.rhs;
        } else if constexpr (std::is_same_v<T, CondStrEq>) {
          return lhs.lhs == rhs.lhs && lhs.rhs == rhs.rhs;
        } else if constexpr (std::is_same_v<T, CondStrContains>) {
          return lhs.hay == rhs.hay && lhs.needle == rhs.needle;
        } else {
          return lhs.lhs == rhs.lhs && lhs.rhs == rhs.rhs;
        }
      },
      a.node());
}

void collect_vars(const Condition& cond, std::set<VarId>& vars, std::set<RVarId>& rvars) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, CondAnd>) {
          collect_vars(*n.left, vars, rvars);
          collect_vars(*n.right, vars, rvars);
        } else if constexpr (std::is_same_v<T, CondNot>) {
          collect_vars(*n.arg, vars, rvars);
        } else if constexpr (std::is_same_v<T, CondRel>) {
          vars.insert(n.v);
          vars.insert(n.w);
          rvars.insert(n.r);
        } else if constexpr (std::is_same_v<T, CondVLabelEq>) {
          if (n.lhs.is_var) vars.insert(n.lhs.var);
          if (n.rhs.is_var) vars.insert(n.rhs.var);
        } else if constexpr (std::is_same_v<T, CondRLabelEq>) {
          if (n.lhs.is_var) rvars.insert(n.lhs.rvar);
          if (n.rhs.is_var) rvars.insert(n.rhs.rvar);
        } else if constexpr (std::is_same_v<T, CondStrEq>) {
          if (n.lhs.is_var) vars.insert(n.lhs.var);
          if (n.rhs.is_var) vars.insert(n.rhs.var);
        } else if constexpr (std::is_same_v<T, CondStrContains>) {
          if (n.hay.is_var) vars.insert(n.hay.var);
          if (n.needle.is_var) vars.insert(n.needle.var);
        } else if constexpr (std::is_same_v<T, CondFloatLt> || std::is_same_v<T, CondFloatGt>) {
          for (const FloatTerm* t : {&n.lhs, &n.rhs}) {
            if (t->kind == FloatTerm::Kind::Mag) rvars.insert(t->rvar);
            if (t->kind == FloatTerm::Kind::CoordOf) vars.insert(t->var);
          }
        }
      },
      cond.node());
}

// ---- Program builders ---------------------------------------------------

ProgramPtr make_empty() { return std::make_shared<Program>(Program::Node{ProgEmpty{}}); }

ProgramPtr make_union(std::vector<ProgramPtr> children) {
  for (const auto& c : children) {
    if (!c) throw ValidationError("Union child must not be null");
  }
  return std::make_shared<Program>(Program::Node{ProgUnion{std::move(children)}});
}

ProgramPtr make_exclude(ProgramPtr left, ProgramPtr right) {
  if (!left || !right) throw ValidationError("Exclude needs two programs");
  return std::make_shared<Program>(Program::Node{ProgExclude{std::move(left), std::move(right)}});
}

ProgramPtr make_find(Find find) {
  if (!find.cond) throw ValidationError("Find needs a condition");
  if (find.rvars.empty()) throw ValidationError("Find needs at least one relation variable");
  for (VarId v : find.vars) check_var_index(v.index, "v");
  for (RVarId r : find.rvars) check_var_index(r.index, "r");

  const std::set<VarId> var_set(find.vars.begin(), find.vars.end());
  const std::set<RVarId> rvar_set(find.rvars.begin(), find.rvars.end());
  if (var_set.size() != find.vars.size()) throw ValidationError("duplicate variable in Find");
  if (rvar_set.size() != find.rvars.size()) {
    throw ValidationError("duplicate relation variable in Find");
  }
  if (!var_set.count(VarId{0})) throw ValidationError("Find must include v0");

  if (find.returns.empty()) throw ValidationError("Find must return at least one variable");
  std::set<VarId> ret_set(find.returns.begin(), find.returns.end());
  if (ret_set.size() != find.returns.size()) throw ValidationError("duplicate return variable");
  for (VarId v : find.returns) {
    if (v == VarId{0}) throw ValidationError("v0 cannot be returned (it is the source)");
    if (!var_set.count(v)) throw ValidationError("return variable not in the Find's variables");
  }

  std::set<VarId> cond_vars;
  std::set<RVarId> cond_rvars;
  collect_vars(*find.cond, cond_vars, cond_rvars);
  for (VarId v : cond_vars) {
    if (!var_set.count(v)) {
      throw ValidationError("condition mentions v" + std::to_string(v.index) +
                            " which is not declared by the Find");
    }
  }
  for (RVarId r : cond_rvars) {
    if (!rvar_set.count(r)) {
      throw ValidationError("condition mentions r" + std::to_string(r.index) +
                            " which is not declared by the Find");
    }
  }
  return std::make_shared<Program>(Program::Node{std::move(find)});
}

bool equal(const Program& a, const Program& b) {
  if (a.node().index() != b.node().index()) return false;
  return std::visit(
      [&b](const auto& lhs) -> bool {
        using T = std::decay_t<decltype(lhs)>;
        const auto& rhs = std::get<T>(b.node());
        if constexpr (std::is_same_v<T, ProgEmpty>) {
          return true;
        } else if constexpr (std::is_same_v<T, ProgUnion>) {
          if (lhs.children.size() != rhs.children.size()) return false;
          for (size_t i = 0; i < lhs.children.size(); ++i) {
            if (!equal(*lhs.children[i], *rhs.children[i])) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, ProgExclude>) {
          return equal(*lhs.left, *rhs.left) && equal(*lhs.right, *rhs.right);
        } else {
          return lhs.vars == rhs.vars && lhs.rvars == rhs.rvars &&
                 lhs.returns == rhs.returns && equal(*lhs.cond, *rhs.cond);
        }
      },
      a.node());
}

// ---- JSON serialization -------------------------------------------------

namespace {

nlohmann::json vlabel_term_to_json(const VLabelTerm& t) {
  if (t.is_var) return {{"var", t.var.index}};
  return {{"lit", to_string(t.lit)}};
}

nlohmann::json rlabel_term_to_json(const RLabelTerm& t) {
  if (t.is_var) return {{"rvar", t.rvar.index}};
  return {{"lit", to_string(t.lit)}};
}

nlohmann::json str_term_to_json(const StrTerm& t) {
  if (t.is_var) return {{"text_of", t.var.index}};
  return {{"lit", t.lit}};
}

nlohmann::json float_term_to_json(const FloatTerm& t) {
  switch (t.kind) {
    case FloatTerm::Kind::Mag:
      return {{"mag_of", t.rvar.index}};
    case FloatTerm::Kind::CoordOf:
      return {{"coord", to_string(t.coord)}, {"var", t.var.index}};
    case FloatTerm::Kind::Const:
      return {{"const", t.value()}};
  }
  return {};
}

class AstParser {
 public:
  ConditionPtr parse_condition(const nlohmann::json& j, const std::string& path) {
    try {
      return parse_condition_impl(j, path);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path + ": " + e.what());
    }
  }

  ProgramPtr parse_program(const nlohmann::json& j, const std::string& path) {
    try {
      return parse_program_impl(j, path);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path + ": " + e.what());
    }
  }

 private:
  static std::string kind_of(const nlohmann::json& j, const std::string& path) {
    if (!j.is_object()) throw ParseError(path + ": expected an object");
    if (!j.contains("kind")) throw ParseError(path + ": missing \"kind\"");
    if (!j["kind"].is_string()) throw ParseError(path + ": \"kind\" must be a string");
    return j["kind"].get<std::string>();
  }

  VarId var_at(const nlohmann::json& j, const char* field, const std::string& path) {
    if (!j.contains(field)) throw ParseError(path + ": missing \"" + field + "\"");
    const int idx = j[field].get<int>();
    if (idx < 0 || idx > kMaxVarIndex) throw ParseError(path + ": variable index out of range");
    return VarId{idx};
  }

  VLabelTerm parse_vlabel_term(const nlohmann::json& j, const std::string& path) {
    if (!j.is_object()) throw ParseError(path + ": expected a term object");
    if (j.contains("var")) return VLabelTerm::of(var_at(j, "var", path));
    if (j.contains("lit")) {
      const EntityLabel l = entity_label_from_string(j["lit"].get<std::string>());
      if (l == EntityLabel::Other) throw ParseError(path + ": 'other' is not a label literal");
      return VLabelTerm::literal(l);
    }
    throw ParseError(path + ": label term needs \"var\" or \"lit\"");
  }

  RLabelTerm parse_rlabel_term(const nlohmann::json& j, const std::string& path) {
    if (!j.is_object()) throw ParseError(path + ": expected a term object");
    if (j.contains("rvar")) {
      const int idx = j["rvar"].get<int>();
      if (idx < 0 || idx > kMaxVarIndex) throw ParseError(path + ": rvar index out of range");
      return RLabelTerm::of(RVarId{idx});
    }
    if (j.contains("lit")) {
      return RLabelTerm::literal(relation_label_from_string(j["lit"].get<std::string>()));
    }
    throw ParseError(path + ": relation-label term needs \"rvar\" or \"lit\"");
  }

  StrTerm parse_str_term(const nlohmann::json& j, const std::string& path) {
    if (!j.is_object()) throw ParseError(path + ": expected a term object");
    if (j.contains("text_of")) return StrTerm::text_of(var_at(j, "text_of", path));
    if (j.contains("lit")) {
      try {
        return StrTerm::literal(j["lit"].get<std::string>());
      } catch (const ValidationError& e) {
        throw ParseError(path + ": " + e.what());
      }
    }
    throw ParseError(path + ": string term needs \"text_of\" or \"lit\"");
  }

  FloatTerm parse_float_term(const nlohmann::json& j, const std::string& path) {
    if (!j.is_object()) throw ParseError(path + ": expected a term object");
    if (j.contains("mag_of")) {
      const int idx = j["mag_of"].get<int>();
      if (idx < 0 || idx > kMaxVarIndex) throw ParseError(path + ": rvar index out of range");
      return FloatTerm::mag_of(RVarId{idx});
    }
    if (j.contains("coord")) {
      const Coord c = coord_from_string(j["coord"].get<std::string>());
      return FloatTerm::coord_of(var_at(j, "var", path), c);
    }
    if (j.contains("const")) {
      const double v = j["const"].get<double>();
      const int tenths = static_cast<int>(std::lround(v * 10.0));
      if (tenths < 0 || tenths > 10 || std::abs(v - tenths / 10.0) > 1e-9) {
        throw ParseError(path + ": constant must belong to the lattice 0.0, 0.1, ..., 1.0");
      }
      return FloatTerm::constant(tenths);
    }
    throw ParseError(path + ": float term needs \"mag_of\", \"coord\" or \"const\"");
  }

  ConditionPtr parse_condition_impl(const nlohmann::json& j, const std::string& path) {
    const std::string kind = kind_of(j, path);
    if (kind == "true") return cond_true();
    if (kind == "false") return cond_false();
    if (kind == "and") {
      return cond_and(parse_condition(j.at("left"), path + ".left"),
                      parse_condition(j.at("right"), path + ".right"));
    }
    if (kind == "not") return cond_not(parse_condition(j.at("arg"), path + ".arg"));
    if (kind == "rel") {
      const int r = j.at("r").get<int>();
      if (r < 0 || r > kMaxVarIndex) throw ParseError(path + ": rvar index out of range");
      return cond_rel(var_at(j, "v", path), RVarId{r}, var_at(j, "w", path));
    }
    if (kind == "vlabel_eq") {
      return cond_vlabel_eq(parse_vlabel_term(j.at("lhs"), path + ".lhs"),
                            parse_vlabel_term(j.at("rhs"), path + ".rhs"));
    }
    if (kind == "rlabel_eq") {
      return cond_rlabel_eq(parse_rlabel_term(j.at("lhs"), path + ".lhs"),
                            parse_rlabel_term(j.at("rhs"), path + ".rhs"));
    }
    if (kind == "str_eq") {
      return cond_str_eq(parse_str_term(j.at("lhs"), path + ".lhs"),
                         parse_str_term(j.at("rhs"), path + ".rhs"));
    }
    if (kind == "str_contains") {
      return cond_str_contains(parse_str_term(j.at("hay"), path + ".hay"),
                               parse_str_term(j.at("needle"), path + ".needle"));
    }
    if (kind == "float_lt") {
      return cond_float_lt(parse_float_term(j.at("lhs"), path + ".lhs"),
                           parse_float_term(j.at("rhs"), path + ".rhs"));
    }
    if (kind == "float_gt") {
      return cond_float_gt(parse_float_term(j.at("lhs"), path + ".lhs"),
                           parse_float_term(j.at("rhs"), path + ".rhs"));
    }
    throw ParseError(path + ": unknown condition kind '" + kind + "'");
  }

  ProgramPtr parse_program_impl(const nlohmann::json& j, const std::string& path) {
    const std::string kind = kind_of(j, path);
    if (kind == "empty") return make_empty();
    if (kind == "union") {
      if (!j.contains("children") || !j["children"].is_array()) {
        throw ParseError(path + ": union needs a \"children\" array");
      }
      std::vector<ProgramPtr> children;
      size_t i = 0;
      for (const auto& jc : j["children"]) {
        children.push_back(parse_program(jc, path + ".children[" + std::to_string(i) + "]"));
        ++i;
      }
      return make_union(std::move(children));
    }
    if (kind == "exclude") {
      return make_exclude(parse_program(j.at("left"), path + ".left"),
                          parse_program(j.at("right"), path + ".right"));
    }
    if (kind == "find") {
      Find f;
      for (const char* field : {"vars", "rvars", "returns"}) {
        if (!j.contains(field) || !j[field].is_array()) {
          throw ParseError(path + ": find needs a \"" + std::string(field) + "\" array");
        }
      }
      for (const auto& jv : j["vars"]) f.vars.push_back(VarId{jv.get<int>()});
      for (const auto& jr : j["rvars"]) f.rvars.push_back(RVarId{jr.get<int>()});
      for (const auto& jv : j["returns"]) f.returns.push_back(VarId{jv.get<int>()});
      f.cond = parse_condition(j.at("cond"), path + ".cond");
      try {
        return make_find(std::move(f));
      } catch (const ValidationError& e) {
        throw ParseError(path + ": " + e.what());
      }
    }
    throw ParseError(path + ": unknown program kind '" + kind + "'");
  }
};

}  // namespace

nlohmann::json condition_to_json(const Condition& cond) {
  return std::visit(
      [](const auto& n) -> nlohmann::json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, CondTrue>) {
          return {{"kind", "true"}};
        } else if constexpr (std::is_same_v<T, CondFalse>) {
          return {{"kind", "false"}};
        } else if constexpr (std::is_same_v<T, CondAnd>) {
          return {{"kind", "and"},
                  {"left", condition_to_json(*n.left)},
                  {"right", condition_to_json(*n.right)}};
        } else if constexpr (std::is_same_v<T, CondNot>) {
          return {{"kind", "not"}, {"arg", condition_to_json(*n.arg)}};
        } else if constexpr (std::is_same_v<T, CondRel>) {
          return {{"kind", "rel"}, {"v", n.v.index}, {"r", n.r.index}, {"w", n.w.index}};
        } else if constexpr (std::is_same_v<T, CondVLabelEq>) {
          return {{"kind", "vlabel_eq"},
                  {"lhs", vlabel_term_to_json(n.lhs)},
                  {"rhs", vlabel_term_to_json(n.rhs)}};
        } else if constexpr (std::is_same_v<T, CondRLabelEq>) {
          return {{"kind", "rlabel_eq"},
                  {"lhs", rlabel_term_to_json(n.lhs)},
                  {"rhs", rlabel_term_to_json(n.rhs)}};
        } else if constexpr (std::is_same_v<T, CondStrEq>) {
          return {{"kind", "str_eq"},
                  {"lhs", str_term_to_json(n.lhs)},
                  {"rhs", str_term_to_json(n.rhs)}};
        } else if constexpr (std::is_same_v<T, CondStrContains>) {
          return {{"kind", "str_contains"},
                  {"hay", str_term_to_json(n.hay)},
                  {"needle", str_term_to_json(n.needle)}};
        } else if constexpr (std::is_same_v<T, CondFloatLt>) {
          return {{"kind", "float_lt"},
                  {"lhs", float_term_to_json(n.lhs)},
                  {"rhs", float_term_to_json(n.rhs)}};
        } else {
          return {{"kind", "float_gt"},
                  {"lhs", float_term_to_json(n.lhs)},
                  {"rhs", float_term_to_json(n.rhs)}};
        }
      },
      cond.node());
}

ConditionPtr condition_from_json(const nlohmann::json& j) {
  return AstParser{}.parse_condition(j, "$");
}

nlohmann::json program_to_json(const Program& program) {
  return std::visit(
      [](const auto& n) -> nlohmann::json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ProgEmpty>) {
          return {{"kind", "empty"}};
        } else if constexpr (std::is_same_v<T, ProgUnion>) {
          nlohmann::json children = nlohmann::json::array();
          for (const auto& c : n.children) children.push_back(program_to_json(*c));
          return {{"kind", "union"}, {"children", children}};
        } else if constexpr (std::is_same_v<T, ProgExclude>) {
          return {{"kind", "exclude"},
                  {"left", program_to_json(*n.left)},
                  {"right", program_to_json(*n.right)}};
        } else {
          nlohmann::json vars = nlohmann::json::array();
          for (VarId v : n.vars) vars.push_back(v.index);
          nlohmann::json rvars = nlohmann::json::array();
          for (RVarId r : n.rvars) rvars.push_back(r.index);
          nlohmann::json returns = nlohmann::json::array();
          for (VarId v : n.returns) returns.push_back(v.index);
          return {{"kind", "find"},
                  {"vars", vars},
                  {"rvars", rvars},
                  {"cond", condition_to_json(*n.cond)},
                  {"returns", returns}};
        }
      },
      program.node());
}

ProgramPtr program_from_json(const nlohmann::json& j) {
  if (j.is_object() && j.contains("version")) {
    const auto& v = j["version"];
    if (!v.is_number_integer() || v.get<int>() != 1) {
      throw ParseError("$: unsupported program format version");
    }
  }
  return AstParser{}.parse_program(j, "$");
}

std::string serialize_program(const Program& program) {
  nlohmann::json j = program_to_json(program);
  j["version"] = 1;
  return j.dump(2) + "\n";
}

ProgramPtr parse_program(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid program JSON: ") + e.what());
  }
  return program_from_json(j);
}

// ---- Pretty printing ----------------------------------------------------

namespace {

std::string format_float(double v) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(1);
  out << v;
  return out.str();
}

std::string format_vlabel_term(const VLabelTerm& t) {
  if (t.is_var) return "v" + std::to_string(t.var.index) + ".label";
  std::string s = to_string(t.lit);
  s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

std::string format_rlabel_term(const RLabelTerm& t) {
  if (t.is_var) return "r" + std::to_string(t.rvar.index) + ".label";
  std::string s = to_string(t.lit);
  s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

std::string format_str_term(const StrTerm& t) {
  if (t.is_var) return "v" + std::to_string(t.var.index) + ".text";
  return "\"" + t.lit + "\"";
}

std::string format_float_term(const FloatTerm& t) {
  switch (t.kind) {
    case FloatTerm::Kind::Mag:
      return "r" + std::to_string(t.rvar.index) + ".mag";
    case FloatTerm::Kind::CoordOf:
      return "v" + std::to_string(t.var.index) + "." + to_string(t.coord);
    case FloatTerm::Kind::Const:
      return format_float(t.value());
  }
  return "?";
}

// Conjunctions print flattened: a && b && c.
void format_condition_into(const Condition& cond, std::string& out) {
  std::visit(
      [&out](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, CondTrue>) {
          out += "True";
        } else if constexpr (std::is_same_v<T, CondFalse>) {
          out += "False";
        } else if constexpr (std::is_same_v<T, CondAnd>) {
          format_condition_into(*n.left, out);
          out += " && ";
          format_condition_into(*n.right, out);
        } else if constexpr (std::is_same_v<T, CondNot>) {
          out += "Not(";
          format_condition_into(*n.arg, out);
          out += ")";
        } else if constexpr (std::is_same_v<T, CondRel>) {
          out += "Rel(v" + std::to_string(n.v.index) + ", r" + std::to_string(n.r.index) + ", v" +
                 std::to_string(n.w.index) + ")";
        } else if constexpr (std::is_same_v<T, CondVLabelEq>) {
          out += format_vlabel_term(n.lhs) + " == " + format_vlabel_term(n.rhs);
        } else if constexpr (std::is_same_v<T, CondRLabelEq>) {
          out += format_rlabel_term(n.lhs) + " == " + format_rlabel_term(n.rhs);
        } else if constexpr (std::is_same_v<T, CondStrEq>) {
          out += format_str_term(n.lhs) + " == " + format_str_term(n.rhs);
        } else if constexpr (std::is_same_v<T, CondStrContains>) {
          out += "Contains(" + format_str_term(n.hay) + ", " + format_str_term(n.needle) + ")";
        } else if constexpr (std::is_same_v<T, CondFloatLt>) {
          out += format_float_term(n.lhs) + " < " + format_float_term(n.rhs);
        } else {
          out += format_float_term(n.lhs) + " > " + format_float_term(n.rhs);
        }
      },
      cond.node());
}

void format_program_into(const Program& program, int indent, std::string& out) {
  const std::string pad(static_cast<size_t>(indent) * 2, ' ');
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ProgEmpty>) {
          out += pad + "Empty";
        } else if constexpr (std::is_same_v<T, ProgUnion>) {
          if (n.children.empty()) {
            out += pad + "Union()";
            return;
          }
          out += pad + "Union(\n";
          for (size_t i = 0; i < n.children.size(); ++i) {
            format_program_into(*n.children[i], indent + 1, out);
            out += i + 1 < n.children.size() ? ",\n" : "\n";
          }
          out += pad + ")";
        } else if constexpr (std::is_same_v<T, ProgExclude>) {
          out += pad + "Exclude(\n";
          format_program_into(*n.left, indent + 1, out);
          out += ",\n";
          format_program_into(*n.right, indent + 1, out);
          out += "\n" + pad + ")";
        } else {
          out += pad + "Find({";
          for (size_t i = 0; i < n.vars.size(); ++i) {
            out += (i ? ", v" : "v") + std::to_string(n.vars[i].index);
          }
          out += "}, {";
          for (size_t i = 0; i < n.rvars.size(); ++i) {
            out += (i ? ", r" : "r") + std::to_string(n.rvars[i].index);
          }
          out += "},\n" + pad + "     ";
          std::string cond;
          format_condition_into(*n.cond, cond);
          out += cond;
          out += ",\n" + pad + "     {";
          for (size_t i = 0; i < n.returns.size(); ++i) {
            out += (i ? ", v" : "v") + std::to_string(n.returns[i].index);
          }
          out += "})";
        }
      },
      program.node());
}

}  // namespace

std::string format_condition(const Condition& cond) {
  std::string out;
  format_condition_into(cond, out);
  return out;
}

std::string format_program(const Program& program) {
  std::string out;
  format_program_into(program, 0, out);
  out += "\n";
  return out;
}

}  // namespace vrdlink
