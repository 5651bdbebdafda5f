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
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "vrdlink/eval.hpp"
#include "vrdlink/funsd.hpp"
#include "vrdlink/rewrite.hpp"
#include "vrdlink/synth.hpp"
#include "vrdlink/synthetic.hpp"

using namespace vrdlink;

namespace {

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

LinkSpec spec_of(std::string doc, std::set<std::pair<int, int>> links) {
  LinkSpec s;
  s.doc_id = std::move(doc);
  s.links = std::move(links);
  return s;
}

PathSignature sig(std::vector<RelationLabel> labels) { return PathSignature{std::move(labels)}; }

// In-memory synthetic corpus for the end-to-end cases.
Corpus generated(std::vector<LayoutFamily> families, int count, uint64_t seed) {
  SyntheticOptions opt;
  opt.families = std::move(families);
  opt.count_per_family = count;
  opt.seed = seed;
  auto dir = std::filesystem::temp_directory_path() /
             ("vrdlink-synth-" + std::to_string(seed) + "-" + std::to_string(count));
  write_corpus(generate_corpus(opt), dir);
  auto corpus = load_corpus(dir);
  std::filesystem::remove_all(dir);
  return corpus;
}

}  // namespace

TEST_CASE("mining a direct edge yields its one-hop signature") {
  auto g = build_graph("d", {box(0, 0.10, 0.1, 0.20, 0.15), box(1, 0.25, 0.1, 0.35, 0.15)});
  auto report = mine_paths({g}, {spec_of("d", {{0, 1}})}, 2);
  REQUIRE(report.signatures.size() >= 1);
  CHECK(report.total_links == 1);
  CHECK(report.unreachable_links == 0);
  CHECK(std::count(report.signatures.begin(), report.signatures.end(),
                   sig({RelationLabel::Right})) == 1);
  CHECK(report.support.at(sig({RelationLabel::Right})) == 1);
}

TEST_CASE("mining follows two-hop chains") {
  // e0 sits above e2; e1 sits right of e2; e0 and e1 share nothing.
  auto g = build_graph("d", {box(0, 0.1, 0.10, 0.2, 0.15), box(2, 0.1, 0.30, 0.2, 0.35),
                             box(1, 0.3, 0.30, 0.4, 0.35)});
  REQUIRE(g.relations.size() == 4);  // 0<->2 vertical, 2<->1 horizontal

  auto report = mine_paths({g}, {spec_of("d", {{0, 1}})}, 2);
  CHECK(report.signatures == std::vector<PathSignature>{
                                 sig({RelationLabel::Down, RelationLabel::Right})});
  CHECK(report.support.at(sig({RelationLabel::Down, RelationLabel::Right})) == 1);

  SUBCASE("a length bound of one leaves the link unreachable") {
    auto tight = mine_paths({g}, {spec_of("d", {{0, 1}})}, 1);
    CHECK(tight.signatures.empty());
    CHECK(tight.unreachable_links == 1);
  }
  SUBCASE("disconnected links count as unreachable") {
    auto far = build_graph("d2", {box(0, 0.1, 0.1, 0.2, 0.15), box(7, 0.7, 0.7, 0.8, 0.75)});
    CHECK(far.relations.empty());
    auto rep = mine_paths({g, far}, {spec_of("d", {{0, 1}}), spec_of("d2", {{0, 7}})}, 2);
    CHECK(rep.total_links == 2);
    CHECK(rep.unreachable_links == 1);
  }
  SUBCASE("support counts linked pairs, not paths") {
    // A second document with the same shape doubles the support.
    auto g2 = g;
    g2.doc_id = "d2";
    auto rep = mine_paths({g, g2}, {spec_of("d", {{0, 1}}), spec_of("d2", {{0, 1}})}, 2);
    CHECK(rep.support.at(sig({RelationLabel::Down, RelationLabel::Right})) == 2);
    CHECK(rep.total_links == 2);
  }
}

TEST_CASE("initial programs are label-free relation chains") {
  SUBCASE("one hop") {
    auto programs = initial_programs({sig({RelationLabel::Right})});
    REQUIRE(programs.size() == 1);
    const auto& f = std::get<Find>(programs[0]->node());
    CHECK(f.vars.size() == 2);
    CHECK(f.rvars.size() == 1);
    REQUIRE(f.returns.size() == 1);
    CHECK(f.returns[0] == VarId{1});
    // The condition is the bare chain; the label is left for refinement.
    CHECK(equal(*f.cond, *cond_rel(VarId{0}, RVarId{0}, VarId{1})));
  }
  SUBCASE("two hops") {
    auto programs = initial_programs({sig({RelationLabel::Down, RelationLabel::Right})});
    REQUIRE(programs.size() == 1);
    const auto& f = std::get<Find>(programs[0]->node());
    CHECK(f.vars.size() == 3);
    CHECK(f.rvars.size() == 2);
    CHECK(f.returns == std::vector<VarId>{VarId{2}});
    CHECK(equal(*f.cond, *cond_and(cond_rel(VarId{0}, RVarId{0}, VarId{1}),
                                   cond_rel(VarId{1}, RVarId{1}, VarId{2}))));
  }
  SUBCASE("same-length signatures produce key-identical chains") {
    // One chain per signature; the version space later collapses them
    // because the chain does not constrain the labels.
    auto programs = initial_programs({sig({RelationLabel::Right}), sig({RelationLabel::Down})});
    REQUIRE(programs.size() == 2);
    CHECK(program_key(std::get<Find>(programs[0]->node())) ==
          program_key(std::get<Find>(programs[1]->node())));
  }
  SUBCASE("empty input, empty output") { CHECK(initial_programs({}).empty()); }
}

TEST_CASE("version-space entries merge on their pair-level signature") {
  // The synth corpus only aliases these vectors; they must outlive it.
  std::vector<DocumentGraph> graphs = {
      build_graph("d", {box(0, 0.10, 0.1, 0.20, 0.15, EntityLabel::Question, "Name:"),
                        box(1, 0.25, 0.1, 0.35, 0.15, EntityLabel::Answer, "Alice")})};
  std::vector<LinkSpec> specs = {spec_of("d", {{0, 1}})};
  auto corpus = make_synth_corpus(graphs, specs);

  Find f;
  f.vars = {VarId{0}, VarId{1}};
  f.rvars = {RVarId{0}};
  f.cond = cond_rel(VarId{0}, RVarId{0}, VarId{1});
  f.returns = {VarId{1}};

  // mag is 0.2 for both edges, so thresholds 0.3 and 0.4 are coextensive.
  Find fa = f;
  fa.cond = cond_and(f.cond, cond_float_lt(FloatTerm::mag_of(RVarId{0}), FloatTerm::constant(3)));
  Find fb = f;
  fb.cond = cond_and(f.cond, cond_float_lt(FloatTerm::mag_of(RVarId{0}), FloatTerm::constant(4)));

  SynthesisState state;
  auto vs = create_version_space({make_find(fa), make_find(fb)}, corpus, state);
  REQUIRE(vs.size() == 1);
  const VsEntry& entry = vs.begin()->second;
  CHECK(entry.bucket.size() == 2);
  CHECK(entry.pos == PairSet{{0, 0, 1}});
  CHECK(entry.neg == PairSet{{0, 1, 0}});
  REQUIRE(entry.tables.size() == 1);
  CHECK(entry.tables[0].data.size() % 3 == 0);  // two vars + one rvar per row

  SUBCASE("revisiting a known program key is a no-op") {
    auto again = create_version_space({make_find(fa)}, corpus, state);
    CHECK(again.empty());
  }
  SUBCASE("distinct signatures stay separate") {
    Find fc = f;
    fc.cond = cond_and(f.cond, cond_vlabel_eq(VLabelTerm::of(VarId{1}),
                                              VLabelTerm::literal(EntityLabel::Answer)));
    SynthesisState fresh;
    auto vs2 = create_version_space({make_find(f), make_find(fc)}, corpus, fresh);
    CHECK(vs2.size() == 2);
  }
}

TEST_CASE("refinement turns a mixed entry into a perfect program") {
  // Both e1 and e2 sit right of e0, but only e1 is the linked answer; the
  // graph is built unpruned so both edges exist.
  GraphConfig cfg;
  cfg.prune = false;
  std::vector<DocumentGraph> graphs = {
      build_graph("d",
                  {box(0, 0.10, 0.1, 0.20, 0.15, EntityLabel::Question, "Name:"),
                   box(1, 0.25, 0.1, 0.35, 0.15, EntityLabel::Answer, "Alice"),
                   box(2, 0.50, 0.1, 0.60, 0.15, EntityLabel::Header, "Misc")},
                  cfg)};
  std::vector<LinkSpec> specs = {spec_of("d", {{0, 1}})};
  auto corpus = make_synth_corpus(graphs, specs);
  const DocumentGraph& g = graphs[0];

  SynthesisState state;
  auto vs = create_version_space(initial_programs({sig({RelationLabel::Right})}), corpus, state);
  REQUIRE(vs.size() == 1);
  CHECK(vs.begin()->second.pos == PairSet{{0, 0, 1}});
  CHECK(vs.begin()->second.neg.size() == 5);  // every other ordered edge pair

  auto out = refine(vs, corpus, state);
  CHECK_FALSE(out.timed_out);
  REQUIRE_FALSE(state.pp.empty());
  CHECK(state.pcover == PairSet{{0, 0, 1}});
  // No single atom is perfect here (each keeps some stray pair), so the
  // positives come out of the Exclude composition — still perfect on the
  // training document, and together they cover exactly the gold link.
  LinkSet pos_union;
  for (const auto& p : state.pp) {
    auto links = eval_program(*p, g);
    for (const auto& pr : links.pairs) CHECK(specs[0].links.count(pr) == 1);
    pos_union = link_union(pos_union, links);
  }
  CHECK(pos_union.pairs == specs[0].links);
  // Perfect negatives never touch gold pairs.
  for (const auto& p : state.np) {
    for (const auto& pr : eval_program(*p, g).pairs) CHECK(specs[0].links.count(pr) == 0);
  }
  // Inserted children improved precision strictly.
  for (const auto& rec : out.insertions) CHECK(rec.child_prec > rec.parent_prec);
}

TEST_CASE("a corpus without links synthesizes the empty program") {
  auto g = build_graph("d", {box(0, 0.1, 0.1, 0.2, 0.15), box(1, 0.25, 0.1, 0.35, 0.15)});
  auto result = synthesize({g}, {spec_of("d", {})});
  CHECK(std::holds_alternative<ProgEmpty>(result.final_program->node()));
  CHECK(result.total_links == 0);
  CHECK(result.covered_links == 0);
  CHECK(result.positives.empty());
  for (const auto& g2 : {g}) CHECK(eval_program(*result.final_program, g2).empty());
}

TEST_CASE("minimum support filters rare signatures") {
  // Nine docs exhibit Right, one exhibits Down+Right.
  std::vector<DocumentGraph> graphs;
  std::vector<LinkSpec> specs;
  for (int i = 0; i < 9; ++i) {
    graphs.push_back(build_graph("r" + std::to_string(i),
                                 {box(0, 0.10, 0.1, 0.20, 0.15, EntityLabel::Question, "K"),
                                  box(1, 0.25, 0.1, 0.35, 0.15, EntityLabel::Answer, "V")}));
    specs.push_back(spec_of("r" + std::to_string(i), {{0, 1}}));
  }
  graphs.push_back(build_graph("chain", {box(0, 0.1, 0.10, 0.2, 0.15),
                                         box(2, 0.1, 0.30, 0.2, 0.35),
                                         box(1, 0.3, 0.30, 0.4, 0.35)}));
  specs.push_back(spec_of("chain", {{0, 1}}));

  SynthConfig cfg;
  cfg.min_support = 5;
  auto result = synthesize(graphs, specs, cfg);
  // The two-hop signature (support 1) was dropped before program creation.
  CHECK(result.mining.support.at(sig({RelationLabel::Right})) == 9);
  CHECK(result.covered_links == 9);
  CHECK(result.total_links == 10);
}

TEST_CASE("end-to-end synthesis invariants on a synthetic corpus") {
  auto corpus = generated({LayoutFamily::Flat, LayoutFamily::Grouped}, 4, 21);
  auto result = synthesize(corpus.graphs, corpus.specs);

  REQUIRE_FALSE(result.positives.empty());
  CHECK_FALSE(result.timed_out);

  // Gold pairs per document for membership checks.
  std::map<std::string, const LinkSpec*> by_id;
  for (const auto& s : corpus.specs) by_id[s.doc_id] = &s;

  long long covered = 0;
  for (const auto& g : corpus.graphs) {
    const LinkSpec& spec = *by_id.at(g.doc_id);

    LinkSet pos_union;
    for (const auto& p : result.positives) {
      auto links = eval_program(*p, g);
      // Perfect positives never fire on a non-link in training data.
      for (const auto& pr : links.pairs) CHECK(spec.links.count(pr) == 1);
      pos_union = link_union(pos_union, links);
    }
    LinkSet neg_union;
    for (const auto& p : result.negatives) {
      auto links = eval_program(*p, g);
      for (const auto& pr : links.pairs) CHECK(spec.links.count(pr) == 0);
      neg_union = link_union(neg_union, links);
    }
    // The final program is exactly union(PP) minus union(NP).
    CHECK(eval_program(*result.final_program, g) == link_difference(pos_union, neg_union));
    covered += static_cast<long long>(link_difference(pos_union, neg_union).size());
  }
  CHECK(covered == result.covered_links);
  CHECK(result.covered_links <= result.total_links);

  // Iteration bookkeeping: covers grow monotonically, insertions improve.
  size_t last_pcover = 0;
  for (const auto& it : result.iterations) {
    CHECK(it.pcover_size >= last_pcover);
    last_pcover = it.pcover_size;
    for (const auto& rec : it.insertions) CHECK(rec.child_prec > rec.parent_prec);
  }

  // Training precision of the final program is 1 by construction.
  PredictionMap preds;
  for (const auto& g : corpus.graphs) preds[g.doc_id] = eval_program(*result.final_program, g);
  auto report = score(preds, corpus.specs);
  CHECK(report.fp == 0);
  CHECK(report.precision == doctest::Approx(1.0));
  CHECK(report.recall >= 0.9);  // both families are learnable within defaults
}

TEST_CASE("synthesis output is deterministic") {
  auto corpus = generated({LayoutFamily::Flat}, 3, 5);
  auto a = synthesize(corpus.graphs, corpus.specs);
  auto b = synthesize(corpus.graphs, corpus.specs);
  CHECK(serialize_program(*a.final_program) == serialize_program(*b.final_program));
  REQUIRE(a.positives.size() == b.positives.size());
  for (size_t i = 0; i < a.positives.size(); ++i) {
    CHECK(serialize_program(*a.positives[i]) == serialize_program(*b.positives[i]));
  }
  CHECK(a.covered_links == b.covered_links);
}

TEST_CASE("tight timeouts degrade gracefully") {
  auto corpus = generated({LayoutFamily::Grouped}, 6, 3);
  SynthConfig cfg;
  cfg.timeout_seconds = 1e-9;  // expires immediately
  auto result = synthesize(corpus.graphs, corpus.specs, cfg);
  CHECK(result.timed_out);
  // Still a valid (possibly empty) program.
  CHECK(result.final_program != nullptr);
  for (const auto& g : corpus.graphs) CHECK_NOTHROW(eval_program(*result.final_program, g));
}
