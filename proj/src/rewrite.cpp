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

#include "vrdlink/rewrite.hpp"

#include <algorithm>

namespace vrdlink {

namespace {

bool is_true(const Condition& c) { return std::holds_alternative<CondTrue>(c.node()); }
bool is_false(const Condition& c) { return std::holds_alternative<CondFalse>(c.node()); }

// Coordinate-pair axioms over one variable's box: x0 <= x1 and y0 <= y1,
// with equality impossible for the strict rules below only when the rule
// set says so (the language treats boxes as non-degenerate).
// Returns -1 (no rule), 0 (False) or 1 (True).
int coord_rule(const FloatTerm& lhs, const FloatTerm& rhs, bool is_lt) {
  if (lhs.kind != FloatTerm::Kind::CoordOf || rhs.kind != FloatTerm::Kind::CoordOf) return -1;
  if (lhs.var != rhs.var) return -1;
  const Coord a = lhs.coord;
  const Coord b = rhs.coord;
  // lt(x0, x1) / lt(y0, y1) are true; their flips false. gt mirrors lt.
  auto low_high = [](Coord lo, Coord hi, Coord x, Coord y) { return x == lo && y == hi; };
  if (is_lt) {
    if (low_high(Coord::X0, Coord::X1, a, b) || low_high(Coord::Y0, Coord::Y1, a, b)) return 1;
    if (low_high(Coord::X1, Coord::X0, a, b) || low_high(Coord::Y1, Coord::Y0, a, b)) return 0;
  } else {
    if (low_high(Coord::X1, Coord::X0, a, b) || low_high(Coord::Y1, Coord::Y0, a, b)) return 1;
    if (low_high(Coord::X0, Coord::X1, a, b) || low_high(Coord::Y0, Coord::Y1, a, b)) return 0;
  }
  return -1;
}

ConditionPtr from_bool(bool v) { return v ? cond_true() : cond_false(); }

ConditionPtr rewrite_float_cmp(const FloatTerm& lhs, const FloatTerm& rhs, bool is_lt,
                               const ConditionPtr& original) {
  if (lhs == rhs) return cond_false();  // strict comparison of a term with itself
  const int coord = coord_rule(lhs, rhs, is_lt);
  if (coord == 0) return cond_false();
  if (coord == 1) return cond_true();
  if (lhs.kind == FloatTerm::Kind::Const && rhs.kind == FloatTerm::Kind::Const) {
    return from_bool(is_lt ? lhs.tenths < rhs.tenths : lhs.tenths > rhs.tenths);
  }
  return original;
}

}  // namespace

ConditionPtr rewrite(const ConditionPtr& cond) {
  return std::visit(
      [&cond](const auto& n) -> ConditionPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, CondAnd>) {
          ConditionPtr left = rewrite(n.left);
          ConditionPtr right = rewrite(n.right);
          if (is_false(*left) || is_false(*right)) return cond_false();
          if (is_true(*left)) return right;
          if (is_true(*right)) return left;
          if (equal(*left, *right)) return left;
          if (left == n.left && right == n.right) return cond;
          return cond_and(std::move(left), std::move(right));
        } else if constexpr (std::is_same_v<T, CondNot>) {
          ConditionPtr arg = rewrite(n.arg);
          if (is_true(*arg)) return cond_false();
          if (is_false(*arg)) return cond_true();
          if (arg == n.arg) return cond;
          return cond_not(std::move(arg));
        } else if constexpr (std::is_same_v<T, CondVLabelEq>) {
          if (n.lhs == n.rhs) return cond_true();
          if (!n.lhs.is_var && !n.rhs.is_var) return from_bool(n.lhs.lit == n.rhs.lit);
          return cond;
        } else if constexpr (std::is_same_v<T, CondRLabelEq>) {
          if (n.lhs == n.rhs) return cond_true();
          if (!n.lhs.is_var && !n.rhs.is_var) return from_bool(n.lhs.lit == n.rhs.lit);
          return cond;
        } else if constexpr (std::is_same_v<T, CondStrEq>) {
          if (n.lhs == n.rhs) return cond_true();
          if (!n.lhs.is_var && !n.rhs.is_var) return from_bool(n.lhs.lit == n.rhs.lit);
          return cond;
        } else if constexpr (std::is_same_v<T, CondStrContains>) {
          if (n.hay == n.needle) return cond_true();
          if (!n.hay.is_var && !n.needle.is_var) {
            return from_bool(n.hay.lit.find(n.needle.lit) != std::string::npos);
          }
          return cond;
        } else if constexpr (std::is_same_v<T, CondFloatLt>) {
          return rewrite_float_cmp(n.lhs, n.rhs, /*is_lt=*/true, cond);
        } else if constexpr (std::is_same_v<T, CondFloatGt>) {
          return rewrite_float_cmp(n.lhs, n.rhs, /*is_lt=*/false, cond);
        } else {
          return cond;  // True, False, Rel are already normal
        }
      },
      cond->node());
}

namespace {

void key_into(const Condition& cond, std::string& out);

std::string key_of(const Condition& cond) {
  std::string s;
  key_into(cond, s);
  return s;
}

void flatten_conjuncts(const Condition& cond, std::vector<const Condition*>& out) {
  if (const auto* a = std::get_if<CondAnd>(&cond.node())) {
    flatten_conjuncts(*a->left, out);
    flatten_conjuncts(*a->right, out);
  } else {
    out.push_back(&cond);
  }
}

void float_term_key(const FloatTerm& t, std::string& out) {
  switch (t.kind) {
    case FloatTerm::Kind::Mag:
      out += "m" + std::to_string(t.rvar.index);
      break;
    case FloatTerm::Kind::CoordOf:
      out += "v" + std::to_string(t.var.index) + "." + to_string(t.coord);
      break;
    case FloatTerm::Kind::Const:
      out += "c" + std::to_string(t.tenths);
      break;
  }
}

void key_into(const Condition& cond, std::string& out) {
  std::visit(
      [&out, &cond](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, CondTrue>) {
          out += "T";
        } else if constexpr (std::is_same_v<T, CondFalse>) {
          out += "F";
        } else if constexpr (std::is_same_v<T, CondAnd>) {
          // Conjunct multiset, order-independent: sort the flattened keys.
          std::vector<const Condition*> parts;
          flatten_conjuncts(cond, parts);
          std::vector<std::string> keys;
          keys.reserve(parts.size());
          for (const Condition* p : parts) keys.push_back(key_of(*p));
          std::sort(keys.begin(), keys.end());
          keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
          out += "&(";
          for (size_t i = 0; i < keys.size(); ++i) {
            if (i) out += ",";
            out += keys[i];
          }
          out += ")";
        } else if constexpr (std::is_same_v<T, CondNot>) {
          out += "!(";
          key_into(*n.arg, out);
          out += ")";
        } else if constexpr (std::is_same_v<T, CondRel>) {
          out += "rel(v" + std::to_string(n.v.index) + ",r" + std::to_string(n.r.index) + ",v" +
                 std::to_string(n.w.index) + ")";
        } else if constexpr (std::is_same_v<T, CondVLabelEq>) {
          auto term = [](const VLabelTerm& t) {
            return t.is_var ? "v" + std::to_string(t.var.index) : std::string(to_string(t.lit));
          };
          std::string a = term(n.lhs), b = term(n.rhs);
          if (b < a) std::swap(a, b);  // == is symmetric
          out += "vleq(" + a + "," + b + ")";
        } else if constexpr (std::is_same_v<T, CondRLabelEq>) {
          auto term = [](const RLabelTerm& t) {
            return t.is_var ? "r" + std::to_string(t.rvar.index) : std::string(to_string(t.lit));
          };
          std::string a = term(n.lhs), b = term(n.rhs);
          if (b < a) std::swap(a, b);
          out += "rleq(" + a + "," + b + ")";
        } else if constexpr (std::is_same_v<T, CondStrEq>) {
          auto term = [](const StrTerm& t) {
            return t.is_var ? "v" + std::to_string(t.var.index) + ".text" : "'" + t.lit + "'";
          };
          std::string a = term(n.lhs), b = term(n.rhs);
          if (b < a) std::swap(a, b);
          out += "seq(" + a + "," + b + ")";
        } else if constexpr (std::is_same_v<T, CondStrContains>) {
          auto term = [](const StrTerm& t) {
            return t.is_var ? "v" + std::to_string(t.var.index) + ".text" : "'" + t.lit + "'";
          };
          out += "scon(" + term(n.hay) + "," + term(n.needle) + ")";
        } else if constexpr (std::is_same_v<T, CondFloatLt>) {
          out += "lt(";
          float_term_key(n.lhs, out);
          out += ",";
          float_term_key(n.rhs, out);
          out += ")";
        } else {
          out += "gt(";
          float_term_key(n.lhs, out);
          out += ",";
          float_term_key(n.rhs, out);
          out += ")";
        }
      },
      cond.node());
}

}  // namespace

std::string canonical_key(const Condition& cond) {
  ConditionPtr normal = rewrite(std::make_shared<Condition>(cond.node()));
  return key_of(*normal);
}

std::string program_key(const Find& find) {
  std::string out = "find(v=[";
  for (size_t i = 0; i < find.vars.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(find.vars[i].index);
  }
  out += "];r=[";
  for (size_t i = 0; i < find.rvars.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(find.rvars[i].index);
  }
  out += "];ret=[";
  for (size_t i = 0; i < find.returns.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(find.returns[i].index);
  }
  out += "];";
  out += canonical_key(*find.cond);
  out += ")";
  return out;
}

}  // namespace vrdlink
