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

#include "vrdlink/interp.hpp"

#include <algorithm>

#include "vrdlink/errors.hpp"

namespace vrdlink {

namespace {

const Entity& bound_entity(const Binding& b, VarId v, const DocumentGraph& g) {
  const int32_t id = b.entity(v);
  if (id < 0) throw Error("variable v" + std::to_string(v.index) + " is unbound");
  const Entity* e = g.entity_by_id(id);
  if (e == nullptr) throw Error("binding references unknown entity id " + std::to_string(id));
  return *e;
}

const Relation& bound_relation(const Binding& b, RVarId r, const DocumentGraph& g) {
  const int32_t idx = b.relation(r);
  if (idx < 0 || static_cast<size_t>(idx) >= g.relations.size()) {
    throw Error("relation variable r" + std::to_string(r.index) + " is unbound or out of range");
  }
  return g.relations[static_cast<size_t>(idx)];
}

EntityLabel vlabel_value(const VLabelTerm& t, const Binding& b, const DocumentGraph& g) {
  return t.is_var ? bound_entity(b, t.var, g).label : t.lit;
}

RelationLabel rlabel_value(const RLabelTerm& t, const Binding& b, const DocumentGraph& g) {
  return t.is_var ? bound_relation(b, t.rvar, g).label : t.lit;
}

const std::string& str_value(const StrTerm& t, const Binding& b, const DocumentGraph& g) {
  return t.is_var ? bound_entity(b, t.var, g).text : t.lit;
}

double float_value(const FloatTerm& t, const Binding& b, const DocumentGraph& g) {
  switch (t.kind) {
    case FloatTerm::Kind::Mag:
      return bound_relation(b, t.rvar, g).mag;
    case FloatTerm::Kind::CoordOf: {
      const Entity& e = bound_entity(b, t.var, g);
      switch (t.coord) {
        case Coord::X0:
          return e.x0;
        case Coord::X1:
          return e.x1;
        case Coord::Y0:
          return e.y0;
        case Coord::Y1:
          return e.y1;
      }
      return e.x0;
    }
    case FloatTerm::Kind::Const:
      return t.value();
  }
  return 0.0;
}

void emit_pairs(const Find& find, const Binding& b, LinkSet& out) {
  const int32_t src = b.entity(VarId{0});
  for (VarId ret : find.returns) out.pairs.emplace(src, b.entity(ret));
}

// ---- Join-based enumeration --------------------------------------------

struct JoinPlan {
  std::vector<const CondRel*> rel_atoms;  // top-level positive Rel conjuncts
  std::vector<VarId> loose_vars;          // declared vars not covered by atoms
  std::vector<RVarId> loose_rvars;        // declared rvars not covered by atoms
};

void flatten_top_conjuncts(const Condition& cond, std::vector<const Condition*>& out) {
  if (const auto* a = std::get_if<CondAnd>(&cond.node())) {
    flatten_top_conjuncts(*a->left, out);
    flatten_top_conjuncts(*a->right, out);
  } else {
    out.push_back(&cond);
  }
}

// Orders Rel atoms so each one shares a variable with the already-ordered
// prefix when possible; keeps enumeration connected for chain conditions.
JoinPlan make_plan(const Find& find) {
  JoinPlan plan;
  std::vector<const Condition*> conjuncts;
  flatten_top_conjuncts(*find.cond, conjuncts);
  std::vector<const CondRel*> atoms;
  for (const Condition* c : conjuncts) {
    if (const auto* rel = std::get_if<CondRel>(&c->node())) atoms.push_back(rel);
  }

  std::set<int> bound_vars;
  std::set<int> bound_rvars;
  std::vector<bool> used(atoms.size(), false);
  for (size_t step = 0; step < atoms.size(); ++step) {
    size_t pick = atoms.size();
    for (size_t i = 0; i < atoms.size(); ++i) {
      if (used[i]) continue;
      const bool connected = bound_vars.count(atoms[i]->v.index) ||
                             bound_vars.count(atoms[i]->w.index) ||
                             bound_rvars.count(atoms[i]->r.index);
      if (connected || bound_vars.empty()) {
        pick = i;
        if (connected || atoms[i]->v.index == 0) break;  // prefer chains rooted at v0
      }
    }
    if (pick == atoms.size()) {
      for (size_t i = 0; i < atoms.size() && pick == atoms.size(); ++i) {
        if (!used[i]) pick = i;
      }
    }
    used[pick] = true;
    plan.rel_atoms.push_back(atoms[pick]);
    bound_vars.insert(atoms[pick]->v.index);
    bound_vars.insert(atoms[pick]->w.index);
    bound_rvars.insert(atoms[pick]->r.index);
  }

  for (VarId v : find.vars) {
    if (!bound_vars.count(v.index)) plan.loose_vars.push_back(v);
  }
  for (RVarId r : find.rvars) {
    if (!bound_rvars.count(r.index)) plan.loose_rvars.push_back(r);
  }
  return plan;
}

class JoinEnumerator {
 public:
  JoinEnumerator(const Find& find, const DocumentGraph& graph,
                 const std::function<void(const Binding&)>& fn)
      : find_(find), graph_(graph), fn_(fn), plan_(make_plan(find)) {}

  void run() {
    if (graph_.relations.empty() && !find_.rvars.empty()) return;
    Binding b;
    step_rel(0, b);
  }

 private:
  void step_rel(size_t k, Binding& b) {
    if (k == plan_.rel_atoms.size()) {
      step_loose_rvar(0, b);
      return;
    }
    const CondRel& atom = *plan_.rel_atoms[k];
    const size_t r_slot = static_cast<size_t>(atom.r.index);
    const size_t v_slot = static_cast<size_t>(atom.v.index);
    const size_t w_slot = static_cast<size_t>(atom.w.index);

    auto try_relation = [&](int32_t rel_idx) {
      const Relation& rel = graph_.relations[static_cast<size_t>(rel_idx)];
      const int32_t old_v = b.var_entity[v_slot];
      const int32_t old_w = b.var_entity[w_slot];
      if (old_v >= 0 && old_v != rel.from_id) return;
      if (b.var_entity[v_slot] < 0) b.var_entity[v_slot] = rel.from_id;
      // Re-read: v and w may share a slot (same variable twice).
      if (b.var_entity[w_slot] >= 0 && b.var_entity[w_slot] != rel.to_id) {
        b.var_entity[v_slot] = old_v;
        return;
      }
      if (b.var_entity[w_slot] < 0) b.var_entity[w_slot] = rel.to_id;
      const int32_t old_r = b.rvar_rel[r_slot];
      b.rvar_rel[r_slot] = rel_idx;
      step_rel(k + 1, b);
      b.rvar_rel[r_slot] = old_r;
      b.var_entity[w_slot] = old_w;
      b.var_entity[v_slot] = old_v;
    };

    if (b.rvar_rel[r_slot] >= 0) {
      // The relation variable is already pinned: just check endpoints.
      const int32_t rel_idx = b.rvar_rel[r_slot];
      const Relation& rel = graph_.relations[static_cast<size_t>(rel_idx)];
      const int32_t old_v = b.var_entity[v_slot];
      if (old_v >= 0 && old_v != rel.from_id) return;
      if (old_v < 0) b.var_entity[v_slot] = rel.from_id;
      const int32_t old_w = b.var_entity[w_slot];
      if (b.var_entity[w_slot] >= 0 && b.var_entity[w_slot] != rel.to_id) {
        b.var_entity[v_slot] = old_v;
        return;
      }
      if (b.var_entity[w_slot] < 0) b.var_entity[w_slot] = rel.to_id;
      step_rel(k + 1, b);
      b.var_entity[w_slot] = old_w;
      b.var_entity[v_slot] = old_v;
      return;
    }

    for (int32_t i = 0; i < static_cast<int32_t>(graph_.relations.size()); ++i) {
      try_relation(i);
    }
  }

  void step_loose_rvar(size_t k, Binding& b) {
    if (k == plan_.loose_rvars.size()) {
      step_loose_var(0, b);
      return;
    }
    const size_t slot = static_cast<size_t>(plan_.loose_rvars[k].index);
    for (int32_t i = 0; i < static_cast<int32_t>(graph_.relations.size()); ++i) {
      b.rvar_rel[slot] = i;
      step_loose_rvar(k + 1, b);
    }
    b.rvar_rel[slot] = -1;
  }

  void step_loose_var(size_t k, Binding& b) {
    if (k == plan_.loose_vars.size()) {
      if (eval_condition(*find_.cond, b, graph_)) fn_(b);
      return;
    }
    const size_t slot = static_cast<size_t>(plan_.loose_vars[k].index);
    for (const Entity& e : graph_.entities) {
      b.var_entity[slot] = e.id;
      step_loose_var(k + 1, b);
    }
    b.var_entity[slot] = -1;
  }

  const Find& find_;
  const DocumentGraph& graph_;
  const std::function<void(const Binding&)>& fn_;
  JoinPlan plan_;
};

}  // namespace

LinkSet link_union(const LinkSet& a, const LinkSet& b) {
  LinkSet out = a;
  out.pairs.insert(b.pairs.begin(), b.pairs.end());
  return out;
}

LinkSet link_difference(const LinkSet& a, const LinkSet& b) {
  LinkSet out;
  std::set_difference(a.pairs.begin(), a.pairs.end(), b.pairs.begin(), b.pairs.end(),
                      std::inserter(out.pairs, out.pairs.end()));
  return out;
}

bool eval_condition(const Condition& cond, const Binding& binding, const DocumentGraph& graph) {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, CondTrue>) {
          return true;
        } else if constexpr (std::is_same_v<T, CondFalse>) {
          return false;
        } else if constexpr (std::is_same_v<T, CondAnd>) {
          return eval_condition(*n.left, binding, graph) &&
                 eval_condition(*n.right, binding, graph);
        } else if constexpr (std::is_same_v<T, CondNot>) {
          return !eval_condition(*n.arg, binding, graph);
        } else if constexpr (std::is_same_v<T, CondRel>) {
          const Relation& rel = bound_relation(binding, n.r, graph);
          return rel.from_id == binding.entity(n.v) && rel.to_id == binding.entity(n.w);
        } else if constexpr (std::is_same_v<T, CondVLabelEq>) {
          return vlabel_value(n.lhs, binding, graph) == vlabel_value(n.rhs, binding, graph);
        } else if constexpr (std::is_same_v<T, CondRLabelEq>) {
          return rlabel_value(n.lhs, binding, graph) == rlabel_value(n.rhs, binding, graph);
        } else if constexpr (std::is_same_v<T, CondStrEq>) {
          return str_value(n.lhs, binding, graph) == str_value(n.rhs, binding, graph);
        } else if constexpr (std::is_same_v<T, CondStrContains>) {
          const std::string& hay = str_value(n.hay, binding, graph);
          const std::string& needle = str_value(n.needle, binding, graph);
          return hay.find(needle) != std::string::npos;
        } else if constexpr (std::is_same_v<T, CondFloatLt>) {
          return float_value(n.lhs, binding, graph) < float_value(n.rhs, binding, graph);
        } else {
          return float_value(n.lhs, binding, graph) > float_value(n.rhs, binding, graph);
        }
      },
      cond.node());
}

LinkSet eval_find_naive(const Find& find, const DocumentGraph& graph) {
  LinkSet out;
  const size_t nv = find.vars.size();
  const size_t nr = find.rvars.size();
  const size_t ne = graph.entities.size();
  const size_t nrel = graph.relations.size();
  if (ne == 0 || (nr > 0 && nrel == 0)) return out;

  std::vector<size_t> ve(nv, 0);
  std::vector<size_t> re(nr, 0);
  Binding b;
  while (true) {
    for (size_t i = 0; i < nv; ++i) {
      b.var_entity[static_cast<size_t>(find.vars[i].index)] =
          graph.entities[ve[i]].id;
    }
    for (size_t i = 0; i < nr; ++i) {
      b.rvar_rel[static_cast<size_t>(find.rvars[i].index)] = static_cast<int32_t>(re[i]);
    }
    if (eval_condition(*find.cond, b, graph)) emit_pairs(find, b, out);

    // Odometer over entity assignments first, then relations.
    size_t i = 0;
    for (; i < nv; ++i) {
      if (++ve[i] < ne) break;
      ve[i] = 0;
    }
    if (i < nv) continue;
    size_t j = 0;
    for (; j < nr; ++j) {
      if (++re[j] < nrel) break;
      re[j] = 0;
    }
    if (j == nr) break;
  }
  return out;
}

void for_each_satisfying_binding(const Find& find, const DocumentGraph& graph,
                                 const std::function<void(const Binding&)>& fn) {
  if (graph.entities.empty()) return;
  JoinEnumerator(find, graph, fn).run();
}

LinkSet eval_find(const Find& find, const DocumentGraph& graph) {
  LinkSet out;
  for_each_satisfying_binding(find, graph,
                              [&](const Binding& b) { emit_pairs(find, b, out); });
  return out;
}

LinkSet eval_program(const Program& program, const DocumentGraph& graph) {
  return std::visit(
      [&graph](const auto& n) -> LinkSet {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ProgEmpty>) {
          return LinkSet{};
        } else if constexpr (std::is_same_v<T, ProgUnion>) {
          LinkSet out;
          for (const auto& c : n.children) out = link_union(out, eval_program(*c, graph));
          return out;
        } else if constexpr (std::is_same_v<T, ProgExclude>) {
          return link_difference(eval_program(*n.left, graph), eval_program(*n.right, graph));
        } else {
          return eval_find(n, graph);
        }
      },
      program.node());
}

std::pair<std::vector<Binding>, std::vector<Binding>> partition_bindings(
    const Find& find, const DocumentGraph& graph, const LinkSpec& spec) {
  std::vector<Binding> positive;
  std::vector<Binding> negative;
  for_each_satisfying_binding(find, graph, [&](const Binding& b) {
    const int32_t src = b.entity(VarId{0});
    bool all_linked = true;
    for (VarId ret : find.returns) {
      if (!spec.links.count({src, b.entity(ret)})) {
        all_linked = false;
        break;
      }
    }
    (all_linked ? positive : negative).push_back(b);
  });
  return {std::move(positive), std::move(negative)};
}

}  // namespace vrdlink
