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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "vrdlink/errors.hpp"
#include "vrdlink/interp.hpp"

using namespace vrdlink;

namespace {

const VarId v0{0};
const VarId v1{1};
const VarId v2{2};
const RVarId r0{0};
const RVarId r1{1};

Entity box(int id, double x0, double y0, double x1, double y1,
           EntityLabel label = EntityLabel::Other, std::string text = "") {
  Entity e;
  e.id = id;
  e.text = std::move(text);
  e.x0 = x0;
  e.y0 = y0;
  e.x1 = x1;
  e.y1 = y1;
  e.label = label;
  return e;
}

// "Name: Alice" — the smallest key/value document.
DocumentGraph name_alice() {
  return build_graph("d", {box(0, 0.10, 0.10, 0.25, 0.15, EntityLabel::Question, "Name:"),
                           box(1, 0.30, 0.10, 0.45, 0.15, EntityLabel::Answer, "Alice")});
}

Find simple_find(ConditionPtr cond, std::vector<VarId> vars = {VarId{0}, VarId{1}},
                 std::vector<RVarId> rvars = {RVarId{0}},
                 std::vector<VarId> returns = {VarId{1}}) {
  Find f;
  f.vars = std::move(vars);
  f.rvars = std::move(rvars);
  f.cond = std::move(cond);
  f.returns = std::move(returns);
  return f;
}

LinkSet links_of(std::set<std::pair<int, int>> pairs) {
  LinkSet s;
  s.pairs = std::move(pairs);
  return s;
}

ConditionPtr right_rel() {
  return cond_and(cond_rel(v0, r0, v1),
                  cond_rlabel_eq(RLabelTerm::of(r0), RLabelTerm::literal(RelationLabel::Right)));
}

// ---- Random-case machinery for the oracle-equivalence suite -------------

DocumentGraph rand_graph(std::mt19937_64& rng, int max_entities) {
  static const std::vector<std::string> texts = {"Name:", "Alice", "a.b", "x/y",
                                                 "-",     "12:30", "note"};
  std::uniform_real_distribution<double> coord(0.0, 0.85);
  std::uniform_real_distribution<double> extent(0.02, 0.12);
  while (true) {
    std::vector<Entity> entities;
    const int n = 2 + static_cast<int>(rng() % static_cast<uint64_t>(max_entities - 1));
    for (int i = 0; i < n; ++i) {
      Entity e;
      e.id = i;
      e.text = texts[rng() % texts.size()];
      e.x0 = coord(rng);
      e.y0 = coord(rng);
      e.x1 = e.x0 + extent(rng);
      e.y1 = e.y0 + extent(rng);
      e.label = static_cast<EntityLabel>(rng() % 4);
      entities.push_back(e);
    }
    GraphConfig cfg;
    cfg.prune = (rng() % 2 == 0);
    auto g = build_graph("d", std::move(entities), cfg);
    if (!g.relations.empty()) return g;
  }
}

ConditionPtr rand_atom(std::mt19937_64& rng, int kvars, int krvars) {
  auto rv = [&] { return VarId{static_cast<int>(rng() % static_cast<uint64_t>(kvars))}; };
  auto rr = [&] { return RVarId{static_cast<int>(rng() % static_cast<uint64_t>(krvars))}; };
  auto rfloat = [&]() -> FloatTerm {
    switch (rng() % 3) {
      case 0: return FloatTerm::mag_of(rr());
      case 1: return FloatTerm::coord_of(rv(), static_cast<Coord>(rng() % 4));
      default: return FloatTerm::constant(static_cast<int>(rng() % 11));
    }
  };
  switch (rng() % 8) {
    case 0: return cond_rel(rv(), rr(), rv());
    case 1:
      return cond_vlabel_eq(VLabelTerm::of(rv()),
                            rng() % 2 ? VLabelTerm::of(rv())
                                      : VLabelTerm::literal(static_cast<EntityLabel>(rng() % 3)));
    case 2:
      return cond_rlabel_eq(RLabelTerm::of(rr()),
                            RLabelTerm::literal(static_cast<RelationLabel>(rng() % 6)));
    case 3: {
      const auto& lits = str_literals();
      return cond_str_contains(StrTerm::text_of(rv()), StrTerm::literal(lits[rng() % 4]));
    }
    case 4: return cond_str_eq(StrTerm::text_of(rv()), StrTerm::text_of(rv()));
    case 5: return cond_float_lt(rfloat(), rfloat());
    case 6: return cond_float_gt(rfloat(), rfloat());
    default: return cond_not(rand_atom(rng, kvars, krvars));
  }
}

Find rand_find(std::mt19937_64& rng, int kvars, int krvars) {
  std::vector<ConditionPtr> conjuncts;
  // Rel atoms dominate real programs; keep them frequent here too.
  if (rng() % 4 != 0) {
    for (int r = 0; r < krvars; ++r) {
      conjuncts.push_back(cond_rel(VarId{static_cast<int>(rng() % static_cast<uint64_t>(kvars))},
                                   RVarId{r},
                                   VarId{static_cast<int>(rng() % static_cast<uint64_t>(kvars))}));
    }
  }
  const int extra = 1 + static_cast<int>(rng() % 3);
  for (int i = 0; i < extra; ++i) conjuncts.push_back(rand_atom(rng, kvars, krvars));

  Find f;
  for (int i = 0; i < kvars; ++i) f.vars.push_back(VarId{i});
  for (int i = 0; i < krvars; ++i) f.rvars.push_back(RVarId{i});
  f.cond = cond_and_all(conjuncts);
  for (int i = 1; i < kvars; ++i) {
    if (rng() % 2 || i == kvars - 1) f.returns.push_back(VarId{i});
  }
  return f;
}

}  // namespace

TEST_CASE("a Right relation with matching labels finds the key-value pair") {
  auto g = name_alice();
  auto p = make_find(simple_find(right_rel()));
  CHECK(eval_program(*p, g) == links_of({{0, 1}}));
  CHECK(eval_find(std::get<Find>(p->node()), g) ==
        eval_find_naive(std::get<Find>(p->node()), g));
}

TEST_CASE("degenerate finds produce nothing") {
  auto g = name_alice();
  CHECK(eval_find(simple_find(cond_false()), g).empty());
  // One entity, hence no relations for r0 to bind.
  auto lone = build_graph("d", {box(0, 0.1, 0.1, 0.2, 0.2)});
  CHECK(eval_find(simple_find(cond_rel(v0, r0, v1)), lone).empty());
  CHECK(eval_find_naive(simple_find(cond_rel(v0, r0, v1)), lone).empty());
  // Unsatisfiable label demand.
  auto p = simple_find(cond_and(
      cond_rel(v0, r0, v1),
      cond_vlabel_eq(VLabelTerm::of(v0), VLabelTerm::literal(EntityLabel::Header))));
  CHECK(eval_find(p, name_alice()).empty());
}

TEST_CASE("eval_condition on explicit bindings") {
  auto g = name_alice();  // relations: 0->1 Right, 1->0 Left
  REQUIRE(g.relations.size() == 2);
  const int right_idx = g.relations[0].label == RelationLabel::Right ? 0 : 1;

  Binding b;
  b.var_entity[0] = 0;
  b.var_entity[1] = 1;
  b.rvar_rel[0] = right_idx;

  // Rel is definitional: it matches the bound relation's endpoints.
  CHECK(eval_condition(*cond_rel(v0, r0, v1), b, g));
  CHECK_FALSE(eval_condition(*cond_rel(v1, r0, v0), b, g));
  // Centers are (0.175, 0.125) and (0.375, 0.125): mag = 0.2 exactly.
  CHECK(eval_condition(*cond_float_lt(FloatTerm::mag_of(r0), FloatTerm::constant(3)), b, g));
  CHECK_FALSE(eval_condition(*cond_float_lt(FloatTerm::mag_of(r0), FloatTerm::constant(2)), b, g));
  CHECK(eval_condition(*cond_str_contains(StrTerm::text_of(v0), StrTerm::literal(":")), b, g));
  CHECK_FALSE(eval_condition(*cond_str_contains(StrTerm::text_of(v1), StrTerm::literal(":")), b, g));
  CHECK(eval_condition(*cond_vlabel_eq(VLabelTerm::of(v1), VLabelTerm::literal(EntityLabel::Answer)),
                       b, g));
  CHECK(eval_condition(*cond_float_gt(FloatTerm::coord_of(v1, Coord::X0),
                                      FloatTerm::coord_of(v0, Coord::X1)),
                       b, g));

  // Referencing an unbound slot is an error, not a silent false.
  Binding empty;
  CHECK_THROWS_AS(eval_condition(*cond_rel(v0, r0, v1), empty, g), Error);
  CHECK_THROWS_AS(eval_condition(*cond_vlabel_eq(VLabelTerm::of(v2), VLabelTerm::of(v2)), b, g),
                  Error);
}

TEST_CASE("join evaluation matches the naive oracle on random cases") {
  std::mt19937_64 rng(20260101);
  int cases = 0;
  while (cases < 500) {
    const int kvars = 2 + static_cast<int>(rng() % 2);
    const int krvars = 1 + static_cast<int>(rng() % 2);
    const DocumentGraph g = rand_graph(rng, 8);
    // Keep the exponential oracle affordable.
    const double cost = std::pow(static_cast<double>(g.entities.size()), kvars) *
                        std::pow(static_cast<double>(g.relations.size()), krvars);
    if (cost > 300000.0) continue;
    const Find f = rand_find(rng, kvars, krvars);
    CHECK(eval_find(f, g) == eval_find_naive(f, g));
    ++cases;
  }
}

TEST_CASE("partition_bindings splits on spec membership") {
  auto g = name_alice();
  LinkSpec spec;
  spec.doc_id = "d";
  spec.links = {{0, 1}};

  SUBCASE("all-positive when the find hits only gold") {
    auto [pos, neg] = partition_bindings(simple_find(right_rel()), g, spec);
    CHECK(pos.size() == 1);
    CHECK(neg.empty());
  }
  SUBCASE("everything is negative under an empty spec") {
    LinkSpec none;
    none.doc_id = "d";
    auto [pos, neg] = partition_bindings(simple_find(right_rel()), g, none);
    CHECK(pos.empty());
    CHECK(neg.size() == 1);
  }
  SUBCASE("an unconstrained Rel splits one/one") {
    auto [pos, neg] = partition_bindings(simple_find(cond_rel(v0, r0, v1)), g, spec);
    CHECK(pos.size() == 1);  // the Right binding emits (0, 1)
    CHECK(neg.size() == 1);  // the Left binding emits (1, 0)
  }
  SUBCASE("false conditions have no bindings at all") {
    auto [pos, neg] = partition_bindings(simple_find(cond_false()), g, spec);
    CHECK(pos.empty());
    CHECK(neg.empty());
  }
  SUBCASE("counts always add up to the satisfying total") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
      const DocumentGraph rg = rand_graph(rng, 6);
      const Find f = rand_find(rng, 2, 1);
      int total = 0;
      for_each_satisfying_binding(f, rg, [&](const Binding&) { ++total; });
      LinkSpec s;
      s.doc_id = "d";
      for (const Relation& r : rg.relations) {
        if (rng() % 2) s.links.emplace(r.from_id, r.to_id);
      }
      auto [pos, neg] = partition_bindings(f, rg, s);
      CHECK(pos.size() + neg.size() == static_cast<size_t>(total));
      for (const Binding& b : pos) {
        for (VarId ret : f.returns) {
          CHECK(s.links.count({b.entity(VarId{0}), b.entity(ret)}) == 1);
        }
      }
      for (const Binding& b : neg) {
        bool offender = false;
        for (VarId ret : f.returns) {
          if (!s.links.count({b.entity(VarId{0}), b.entity(ret)})) offender = true;
        }
        CHECK(offender);
      }
    }
  }
}

TEST_CASE("program algebra") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 30; ++i) {
    const DocumentGraph g = rand_graph(rng, 6);
    auto pa = make_find(rand_find(rng, 2, 1));
    auto pb = make_find(rand_find(rng, 2, 1));
    const LinkSet a = eval_program(*pa, g);
    const LinkSet b = eval_program(*pb, g);

    CHECK(eval_program(*make_empty(), g).empty());
    CHECK(eval_program(*make_exclude(pa, pa), g).empty());
    CHECK(eval_program(*make_union({pa, make_empty()}), g) == a);
    const LinkSet u = eval_program(*make_union({pa, pb}), g);
    CHECK(u == link_union(a, b));
    CHECK(link_difference(u, a) == link_difference(b, a));
    CHECK(eval_program(*make_exclude(pa, pb), g) == link_difference(a, b));
    for (const auto& pr : a.pairs) CHECK(u.contains(pr.first, pr.second));
  }
}

TEST_CASE("adding a conjunct never widens the result") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 60; ++i) {
    const DocumentGraph g = rand_graph(rng, 6);
    Find base = rand_find(rng, 2, 1);
    Find narrowed = base;
    narrowed.cond = cond_and(base.cond, rand_atom(rng, 2, 1));
    const LinkSet wide = eval_find(base, g);
    for (const auto& pr : eval_find(narrowed, g).pairs) {
      CHECK(wide.contains(pr.first, pr.second));
    }
  }
}

TEST_CASE("a three-part union extracts the full hierarchy") {
  // One page: a title over two sections; the left section heads a key with
  // its value to the right.
  std::vector<Entity> entities = {
      box(0, 0.25, 0.05, 0.75, 0.10, EntityLabel::Header, "SEIS ANNUAL REPORT"),
      box(1, 0.05, 0.15, 0.45, 0.20, EntityLabel::Header, "General Information:"),
      box(2, 0.55, 0.15, 0.95, 0.20, EntityLabel::Header, "Hours:"),
      box(3, 0.05, 0.25, 0.20, 0.30, EntityLabel::Question, "Name:"),
      box(4, 0.22, 0.25, 0.37, 0.30, EntityLabel::Answer, "Alice"),
  };
  auto g = build_graph("page", entities);

  auto title_to_section = make_find(simple_find(cond_and_all({
      cond_rel(v0, r0, v1),
      cond_rlabel_eq(RLabelTerm::of(r0), RLabelTerm::literal(RelationLabel::Down)),
      cond_vlabel_eq(VLabelTerm::of(v0), VLabelTerm::literal(EntityLabel::Header)),
      cond_vlabel_eq(VLabelTerm::of(v1), VLabelTerm::literal(EntityLabel::Header)),
  })));
  auto section_to_key = make_find(simple_find(cond_and_all({
      cond_rel(v0, r0, v1),
      cond_rlabel_eq(RLabelTerm::of(r0), RLabelTerm::literal(RelationLabel::Down)),
      cond_vlabel_eq(VLabelTerm::of(v0), VLabelTerm::literal(EntityLabel::Header)),
      cond_str_contains(StrTerm::text_of(v0), StrTerm::literal(":")),
      cond_vlabel_eq(VLabelTerm::of(v1), VLabelTerm::literal(EntityLabel::Question)),
  })));
  auto key_to_value = make_find(simple_find(cond_and_all({
      cond_rel(v0, r0, v1),
      cond_rlabel_eq(RLabelTerm::of(r0), RLabelTerm::literal(RelationLabel::Right)),
      cond_vlabel_eq(VLabelTerm::of(v0), VLabelTerm::literal(EntityLabel::Question)),
      cond_vlabel_eq(VLabelTerm::of(v1), VLabelTerm::literal(EntityLabel::Answer)),
      cond_float_lt(FloatTerm::mag_of(r0), FloatTerm::constant(2)),
  })));

  CHECK(eval_program(*title_to_section, g) == links_of({{0, 1}, {0, 2}}));
  CHECK(eval_program(*section_to_key, g) == links_of({{1, 3}}));
  CHECK(eval_program(*key_to_value, g) == links_of({{3, 4}}));

  auto whole = make_union({title_to_section, section_to_key, key_to_value});
  CHECK(eval_program(*whole, g) == links_of({{0, 1}, {0, 2}, {1, 3}, {3, 4}}));

  // The same result must come out of the reference evaluator.
  LinkSet naive;
  for (const auto& p : {title_to_section, section_to_key, key_to_value}) {
    naive = link_union(naive, eval_find_naive(std::get<Find>(p->node()), g));
  }
  CHECK(eval_program(*whole, g) == naive);
}
