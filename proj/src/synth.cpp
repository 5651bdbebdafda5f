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

#include "vrdlink/synth.hpp"

#include <algorithm>
#include <cassert>
#include <string>
#include <utility>

#include "vrdlink/errors.hpp"
#include "vrdlink/rewrite.hpp"

namespace vrdlink {
namespace {

int64_t pair64(int32_t src, int32_t dst) {
  return (static_cast<int64_t>(src) << 32) | static_cast<uint32_t>(dst);
}

// ---- Path mining ---------------------------------------------------------

struct Adjacency {
  // relation indices grouped by from_id; relations are already sorted by
  // (from, to, label), so each bucket is deterministic.
  std::unordered_map<int32_t, std::vector<int32_t>> out;
};

Adjacency build_adjacency(const DocumentGraph& g) {
  Adjacency adj;
  for (size_t i = 0; i < g.relations.size(); ++i) {
    adj.out[g.relations[i].from_id].push_back(static_cast<int32_t>(i));
  }
  return adj;
}

void collect_signatures(const DocumentGraph& g, const Adjacency& adj, int32_t cur, int32_t target,
                        int depth_left, std::vector<RelationLabel>& labels,
                        std::set<int32_t>& on_path, std::set<std::vector<RelationLabel>>& found) {
  if (depth_left == 0) return;
  auto it = adj.out.find(cur);
  if (it == adj.out.end()) return;
  for (int32_t ri : it->second) {
    const Relation& rel = g.relations[static_cast<size_t>(ri)];
    if (on_path.count(rel.to_id) != 0) continue;  // simple paths only
    labels.push_back(rel.label);
    if (rel.to_id == target) {
      found.insert(labels);
      // A simple path cannot revisit the target, so there is no point in
      // walking past it.
    } else {
      on_path.insert(rel.to_id);
      collect_signatures(g, adj, rel.to_id, target, depth_left - 1, labels, on_path, found);
      on_path.erase(rel.to_id);
    }
    labels.pop_back();
  }
}

// ---- Row bookkeeping -----------------------------------------------------

// All tables of a version-space entry share a layout derived from its Find:
// one slot per declared var (entity id), then one per rvar (relation index).
struct RowLayout {
  size_t nvars = 0;
  size_t nrvars = 0;
  size_t stride = 0;
  size_t v0_slot = 0;
  std::vector<size_t> ret_slots;
};

RowLayout layout_of(const Find& f) {
  RowLayout lo;
  lo.nvars = f.vars.size();
  lo.nrvars = f.rvars.size();
  lo.stride = lo.nvars + lo.nrvars;
  for (size_t i = 0; i < f.vars.size(); ++i) {
    if (f.vars[i] == VarId{0}) lo.v0_slot = i;
  }
  for (VarId ret : f.returns) {
    for (size_t i = 0; i < f.vars.size(); ++i) {
      if (f.vars[i] == ret) lo.ret_slots.push_back(i);
    }
  }
  return lo;
}

size_t slot_of(const Find& f, VarId v) {
  for (size_t i = 0; i < f.vars.size(); ++i) {
    if (f.vars[i] == v) return i;
  }
  throw Error("variable not declared by Find");
}

void classify_row(const RowLayout& lo, int32_t doc, const int32_t* row,
                  const std::unordered_set<int64_t>& links, PairSet& pos, PairSet& neg) {
  const int32_t src = row[lo.v0_slot];
  for (size_t rs : lo.ret_slots) {
    const int32_t dst = row[rs];
    PairKey key{doc, src, dst};
    if (links.count(pair64(src, dst)) != 0) {
      pos.insert(key);
    } else {
      neg.insert(key);
    }
  }
}

void fill_binding(const Find& f, const RowLayout& lo, const int32_t* row, Binding& b) {
  for (size_t i = 0; i < lo.nvars; ++i) {
    b.var_entity[static_cast<size_t>(f.vars[i].index)] = row[i];
  }
  for (size_t j = 0; j < lo.nrvars; ++j) {
    b.rvar_rel[static_cast<size_t>(f.rvars[j].index)] = row[lo.nvars + j];
  }
}

// ---- Candidates ----------------------------------------------------------

struct Candidate {
  ConditionPtr atom;
  bool fresh_rvar = false;  // atom references a relation variable not yet bound
  VarId from{}, to{};       // endpoints of the fresh Rel atom
};

std::vector<Candidate> enumerate_candidates(const Find& f) {
  std::vector<Candidate> out;
  auto add = [&out](ConditionPtr c) { out.push_back({std::move(c), false, {}, {}}); };
  auto add_both = [&](const ConditionPtr& c) {
    add(c);
    add(cond_not(c));
  };

  static const RelationLabel kRelLits[] = {RelationLabel::Top,   RelationLabel::Down,
                                           RelationLabel::Left,  RelationLabel::Right,
                                           RelationLabel::Row,   RelationLabel::Col};
  static const EntityLabel kEntLits[] = {EntityLabel::Header, EntityLabel::Question,
                                         EntityLabel::Answer};

  for (RVarId r : f.rvars) {
    for (RelationLabel l : kRelLits) {
      add_both(cond_rlabel_eq(RLabelTerm::of(r), RLabelTerm::literal(l)));
    }
  }
  for (VarId v : f.vars) {
    for (EntityLabel l : kEntLits) {
      add_both(cond_vlabel_eq(VLabelTerm::of(v), VLabelTerm::literal(l)));
    }
  }
  for (size_t i = 0; i < f.vars.size(); ++i) {
    for (size_t j = i + 1; j < f.vars.size(); ++j) {
      add_both(cond_vlabel_eq(VLabelTerm::of(f.vars[i]), VLabelTerm::of(f.vars[j])));
    }
  }
  for (VarId v : f.vars) {
    for (const std::string& lit : str_literals()) {
      add_both(cond_str_contains(StrTerm::text_of(v), StrTerm::literal(lit)));
    }
  }
  for (size_t i = 0; i < f.vars.size(); ++i) {
    for (size_t j = i + 1; j < f.vars.size(); ++j) {
      add_both(cond_str_eq(StrTerm::text_of(f.vars[i]), StrTerm::text_of(f.vars[j])));
    }
  }

  std::vector<FloatTerm> props;
  for (RVarId r : f.rvars) props.push_back(FloatTerm::mag_of(r));
  for (VarId v : f.vars) {
    for (Coord c : {Coord::X0, Coord::X1, Coord::Y0, Coord::Y1}) {
      props.push_back(FloatTerm::coord_of(v, c));
    }
  }
  for (const FloatTerm& p : props) {
    for (int tenths = 0; tenths <= 10; ++tenths) {
      add_both(cond_float_lt(p, FloatTerm::constant(tenths)));
      add_both(cond_float_gt(p, FloatTerm::constant(tenths)));
    }
  }
  for (size_t i = 0; i < props.size(); ++i) {
    for (size_t j = 0; j < props.size(); ++j) {
      if (i == j) continue;
      add_both(cond_float_lt(props[i], props[j]));
    }
  }

  for (RVarId r : f.rvars) {
    for (VarId a : f.vars) {
      for (VarId b : f.vars) {
        if (a == b) continue;
        add_both(cond_rel(a, r, b));
      }
    }
  }
  // One fresh relation variable; only the positive form, since Not(Rel) over
  // an otherwise unconstrained rvar ranges over every relation in the graph.
  if (f.rvars.size() <= static_cast<size_t>(kMaxVarIndex)) {
    const RVarId fresh{static_cast<int>(f.rvars.size())};
    for (VarId a : f.vars) {
      for (VarId b : f.vars) {
        if (a == b) continue;
        out.push_back({cond_rel(a, fresh, b), true, a, b});
      }
    }
  }
  return out;
}

// ---- Candidate filtering ---------------------------------------------------

struct Filtered {
  std::vector<EntryDocRows> tables;
  PairSet pos, neg;
};

// Rows already satisfy the parent condition; the child keeps exactly the rows
// where the new atom holds (or, for a fresh rvar, each way of binding it).
Filtered filter_candidate(const VsEntry& entry, const Candidate& cand, const SynthCorpus& corpus,
                          bool want_tables) {
  Filtered out;
  const Find& f = entry.find;
  const RowLayout lo = layout_of(f);
  const size_t from_slot = cand.fresh_rvar ? slot_of(f, cand.from) : 0;
  const size_t to_slot = cand.fresh_rvar ? slot_of(f, cand.to) : 0;

  for (const EntryDocRows& t : entry.tables) {
    const DocumentGraph& graph = (*corpus.graphs)[static_cast<size_t>(t.doc)];
    const auto& links = corpus.link_keys[static_cast<size_t>(t.doc)];
    EntryDocRows kept;
    kept.doc = t.doc;
    const size_t nrows = t.data.size() / lo.stride;

    if (!cand.fresh_rvar) {
      Binding b;  // slots are overwritten row by row; unused slots stay -1
      for (size_t r = 0; r < nrows; ++r) {
        const int32_t* row = t.data.data() + r * lo.stride;
        fill_binding(f, lo, row, b);
        if (!eval_condition(*cand.atom, b, graph)) continue;
        classify_row(lo, t.doc, row, links, out.pos, out.neg);
        if (want_tables) kept.data.insert(kept.data.end(), row, row + lo.stride);
      }
    } else {
      const auto& by_ep = corpus.rels_by_endpoints[static_cast<size_t>(t.doc)];
      for (size_t r = 0; r < nrows; ++r) {
        const int32_t* row = t.data.data() + r * lo.stride;
        auto it = by_ep.find({row[from_slot], row[to_slot]});
        if (it == by_ep.end()) continue;
        for (int32_t ri : it->second) {
          classify_row(lo, t.doc, row, links, out.pos, out.neg);
          if (want_tables) {
            kept.data.insert(kept.data.end(), row, row + lo.stride);
            kept.data.push_back(ri);
          }
        }
      }
    }
    if (!kept.data.empty()) out.tables.push_back(std::move(kept));
  }
  return out;
}

// ---- Small set helpers -----------------------------------------------------

bool adds_to(const PairSet& a, const PairSet& cover) {
  for (const PairKey& k : a) {
    if (cover.count(k) == 0) return true;
  }
  return false;
}

bool subset_of_union(const PairSet& a, const PairSet& x, const PairSet& y) {
  for (const PairKey& k : a) {
    if (x.count(k) == 0 && y.count(k) == 0) return false;
  }
  return true;
}

void merge_into(PairSet& dst, const PairSet& src) { dst.insert(src.begin(), src.end()); }

// prec(a) > prec(b), compared exactly as |a⁺|·(|b⁺|+|b⁻|) > |b⁺|·(|a⁺|+|a⁻|).
bool prec_greater(size_t a_pos, size_t a_tot, size_t b_pos, size_t b_tot) {
  return static_cast<unsigned long long>(a_pos) * b_tot >
         static_cast<unsigned long long>(b_pos) * a_tot;
}

double prec_value(size_t pos, size_t tot) {
  return tot == 0 ? 0.0 : static_cast<double>(pos) / static_cast<double>(tot);
}

bool past(const Deadline& deadline) {
  return deadline.has_value() && std::chrono::steady_clock::now() >= *deadline;
}

ProgramPtr union_or_empty(const std::vector<ProgramPtr>& programs) {
  if (programs.empty()) return make_empty();
  return make_union(programs);
}

}  // namespace

// ---- Mining ----------------------------------------------------------------

MiningReport mine_paths(const std::vector<DocumentGraph>& graphs,
                        const std::vector<LinkSpec>& specs, int max_len) {
  if (max_len < 1) throw ValidationError("max_len must be at least 1");
  std::unordered_map<std::string, const DocumentGraph*> by_id;
  for (const DocumentGraph& g : graphs) by_id.emplace(g.doc_id, &g);

  MiningReport report;
  for (const LinkSpec& spec : specs) {
    auto git = by_id.find(spec.doc_id);
    if (git == by_id.end()) throw DataError("no graph for document '" + spec.doc_id + "'");
    const DocumentGraph& g = *git->second;
    const Adjacency adj = build_adjacency(g);
    for (const auto& [src, dst] : spec.links) {
      ++report.total_links;
      std::set<std::vector<RelationLabel>> found;
      std::vector<RelationLabel> labels;
      std::set<int32_t> on_path{src};
      collect_signatures(g, adj, src, dst, max_len, labels, on_path, found);
      if (found.empty()) {
        ++report.unreachable_links;
        continue;
      }
      for (const auto& sig : found) ++report.support[PathSignature{sig}];
    }
  }
  report.signatures.reserve(report.support.size());
  for (const auto& [sig, count] : report.support) {
    (void)count;
    report.signatures.push_back(sig);
  }
  return report;
}

std::vector<ProgramPtr> initial_programs(const std::vector<PathSignature>& signatures) {
  std::vector<ProgramPtr> out;
  for (const PathSignature& sig : signatures) {
    const size_t k = sig.labels.size();
    if (k == 0 || k + 1 > static_cast<size_t>(kMaxVarIndex) + 1) continue;  // off-grammar
    Find f;
    for (size_t i = 0; i <= k; ++i) f.vars.push_back(VarId{static_cast<int>(i)});
    for (size_t i = 0; i < k; ++i) f.rvars.push_back(RVarId{static_cast<int>(i)});
    std::vector<ConditionPtr> conjuncts;
    for (size_t i = 0; i < k; ++i) {
      conjuncts.push_back(cond_rel(f.vars[i], f.rvars[i], f.vars[i + 1]));
    }
    f.cond = cond_and_all(conjuncts);
    f.returns = {f.vars.back()};
    out.push_back(make_find(std::move(f)));
  }
  return out;
}

// ---- Corpus preprocessing ---------------------------------------------------

SynthCorpus make_synth_corpus(const std::vector<DocumentGraph>& graphs,
                              const std::vector<LinkSpec>& specs) {
  if (graphs.size() != specs.size()) {
    throw ValidationError("graphs and specs must be parallel");
  }
  SynthCorpus c;
  c.graphs = &graphs;
  c.specs = &specs;
  c.link_keys.resize(graphs.size());
  c.rels_by_endpoints.resize(graphs.size());
  for (size_t d = 0; d < graphs.size(); ++d) {
    if (graphs[d].doc_id != specs[d].doc_id) {
      throw ValidationError("graph/spec mismatch at index " + std::to_string(d));
    }
    for (const auto& [src, dst] : specs[d].links) c.link_keys[d].insert(pair64(src, dst));
    const auto& rels = graphs[d].relations;
    for (size_t i = 0; i < rels.size(); ++i) {
      c.rels_by_endpoints[d][{rels[i].from_id, rels[i].to_id}].push_back(
          static_cast<int32_t>(i));
    }
  }
  return c;
}

// ---- Version space ----------------------------------------------------------

VersionSpace create_version_space(const std::vector<ProgramPtr>& programs,
                                  const SynthCorpus& corpus, SynthesisState& state) {
  VersionSpace vs;
  for (const ProgramPtr& p : programs) {
    const Find* f = std::get_if<Find>(&p->node());
    if (f == nullptr) throw ValidationError("initial programs must be Find");
    if (!state.visited.insert(program_key(*f)).second) continue;  // exact duplicate

    VsEntry entry;
    entry.find = *f;
    entry.bucket = {p};
    const RowLayout lo = layout_of(*f);
    for (size_t d = 0; d < corpus.graphs->size(); ++d) {
      const DocumentGraph& g = (*corpus.graphs)[d];
      EntryDocRows rows;
      rows.doc = static_cast<int32_t>(d);
      for_each_satisfying_binding(*f, g, [&](const Binding& b) {
        for (VarId v : f->vars) rows.data.push_back(b.entity(v));
        for (RVarId r : f->rvars) rows.data.push_back(b.relation(r));
      });
      const size_t nrows = rows.data.size() / lo.stride;
      for (size_t r = 0; r < nrows; ++r) {
        classify_row(lo, rows.doc, rows.data.data() + r * lo.stride, corpus.link_keys[d],
                     entry.pos, entry.neg);
      }
      if (!rows.data.empty()) entry.tables.push_back(std::move(rows));
    }
    SigKey sig{{entry.pos.begin(), entry.pos.end()}, {entry.neg.begin(), entry.neg.end()}};
    auto [it, inserted] = vs.emplace(std::move(sig), std::move(entry));
    if (!inserted) it->second.bucket.push_back(p);  // same behavior, keep the twin
  }
  return vs;
}

// ---- Refinement --------------------------------------------------------------

namespace {

struct Scored {
  Find find;
  Candidate cand;
  PairSet pos, neg;
  std::string key;
};

}  // namespace

RefineOutcome refine(const VersionSpace& vs, const SynthCorpus& corpus, SynthesisState& state,
                     const Deadline& deadline) {
  RefineOutcome out;
  PairSet working_cover = state.pcover;  // gate (b) view; see decisions ledger

  for (const auto& [sig, entry] : vs) {
    (void)sig;
    if (past(deadline)) {
      out.timed_out = true;
      break;
    }
    if (!adds_to(entry.pos, state.pcover)) continue;  // nothing left to win here

    const size_t entry_pos = entry.pos.size();
    const size_t entry_tot = entry.pos.size() + entry.neg.size();

    std::vector<Scored> scored;
    size_t since_check = 0;
    for (Candidate& cand : enumerate_candidates(entry.find)) {
      if (++since_check % 64 == 0 && past(deadline)) {
        out.timed_out = true;
        break;
      }
      Find child = entry.find;
      if (cand.fresh_rvar) child.rvars.push_back(RVarId{static_cast<int>(child.rvars.size())});
      child.cond = rewrite(cond_and(entry.find.cond, cand.atom));
      if (std::holds_alternative<CondFalse>(child.cond->node())) continue;
      std::string key = program_key(child);
      if (!state.visited.insert(key).second) continue;

      Filtered flt = filter_candidate(entry, cand, corpus, /*want_tables=*/false);
      if (flt.pos.empty() && flt.neg.empty()) continue;
      scored.push_back(Scored{std::move(child), std::move(cand), std::move(flt.pos),
                              std::move(flt.neg), std::move(key)});
    }
    if (out.timed_out) break;

    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
      const size_t at = a.pos.size() + a.neg.size();
      const size_t bt = b.pos.size() + b.neg.size();
      if (prec_greater(a.pos.size(), at, b.pos.size(), bt)) return true;
      if (prec_greater(b.pos.size(), bt, a.pos.size(), at)) return false;
      return a.key < b.key;
    });

    for (Scored& s : scored) {
      if (s.neg.empty()) {  // gate (a): perfect positive
        if (adds_to(s.pos, state.pcover)) {
          ProgramPtr p = make_find(s.find);
          state.pp.push_back(p);
          out.pp_new.push_back(p);
          merge_into(state.pcover, s.pos);
          merge_into(working_cover, s.pos);
          merge_into(state.cover, s.pos);
        }
        continue;
      }
      if (s.pos.empty()) {  // gate (c): perfect negative
        if (adds_to(s.neg, state.ncover)) {
          ProgramPtr p = make_find(s.find);
          state.np.push_back(p);
          out.np_new.push_back(p);
          merge_into(state.ncover, s.neg);
        }
        continue;
      }
      // gate (b): strictly better precision over pairs not yet claimed
      const size_t s_tot = s.pos.size() + s.neg.size();
      if (!adds_to(s.pos, working_cover)) continue;
      if (!prec_greater(s.pos.size(), s_tot, entry_pos, entry_tot)) continue;

      VsEntry child;
      child.find = s.find;
      child.bucket = {make_find(s.find)};
      child.tables = filter_candidate(entry, s.cand, corpus, /*want_tables=*/true).tables;
      child.pos = s.pos;
      child.neg = s.neg;
      SigKey child_sig{{s.pos.begin(), s.pos.end()}, {s.neg.begin(), s.neg.end()}};
      auto [it, inserted] = out.next.emplace(std::move(child_sig), std::move(child));
      if (!inserted) {
        it->second.bucket.push_back(make_find(s.find));
        continue;
      }
      merge_into(working_cover, s.pos);
      merge_into(state.cover, s.pos);
      out.insertions.push_back(
          {prec_value(entry_pos, entry_tot), prec_value(s.pos.size(), s_tot)});
    }
  }

  // Mutually exclusive composition: a surviving entry whose false positives
  // are all produced by some perfect program can be repaired by subtracting
  // the union of everything perfect so far.
  std::vector<ProgramPtr> perfect = state.pp;
  perfect.insert(perfect.end(), state.np.begin(), state.np.end());
  const ProgramPtr p_u = union_or_empty(perfect);
  PairSet claimed;
  for (const auto& [sig, entry] : out.next) {
    (void)sig;
    if (!subset_of_union(entry.neg, state.pcover, state.ncover)) continue;
    if (!adds_to(entry.pos, state.pcover)) continue;
    ProgramPtr px = make_exclude(entry.bucket.front(), p_u);
    state.pp.push_back(px);
    out.pp_new.push_back(px);
    merge_into(claimed, entry.pos);
  }
  merge_into(state.pcover, claimed);
  merge_into(state.epcover, claimed);
  merge_into(state.cover, claimed);

  for (auto it = out.next.begin(); it != out.next.end();) {
    if (!adds_to(it->second.pos, state.pcover)) {
      it = out.next.erase(it);
    } else {
      ++it;
    }
  }
  return out;
}

// ---- Driver -------------------------------------------------------------------

SynthesisResult synthesize(const std::vector<DocumentGraph>& graphs,
                           const std::vector<LinkSpec>& specs, const SynthConfig& config,
                           const ProgressFn& progress) {
  if (graphs.empty()) throw ValidationError("corpus is empty");
  if (config.max_iterations < 0) throw ValidationError("max_iterations must be >= 0");

  SynthesisResult result;
  result.mining = mine_paths(graphs, specs, config.max_path_len);
  result.total_links = result.mining.total_links;

  std::vector<PathSignature> kept;
  for (const PathSignature& sig : result.mining.signatures) {
    if (result.mining.support.at(sig) >= config.min_support) kept.push_back(sig);
  }

  Deadline deadline;
  if (config.timeout_seconds > 0) {
    deadline = std::chrono::steady_clock::now() +
               std::chrono::microseconds(
                   static_cast<long long>(config.timeout_seconds * 1e6));
  }

  const SynthCorpus corpus = make_synth_corpus(graphs, specs);
  SynthesisState state;
  VersionSpace vs = create_version_space(initial_programs(kept), corpus, state);

  for (int iter = 1; iter <= config.max_iterations; ++iter) {
    if (vs.empty()) break;
    const size_t entries_in = vs.size();
    RefineOutcome outcome = refine(vs, corpus, state, deadline);

    IterationStats stats;
    stats.iteration = iter;
    stats.entries_in = entries_in;
    stats.entries_out = outcome.next.size();
    stats.pp_added = static_cast<int>(outcome.pp_new.size());
    stats.np_added = static_cast<int>(outcome.np_new.size());
    stats.cover_size = state.cover.size();
    stats.pcover_size = state.pcover.size();
    stats.ncover_size = state.ncover.size();
    stats.insertions = std::move(outcome.insertions);
    if (progress) progress(stats);
    result.iterations.push_back(std::move(stats));

    vs = std::move(outcome.next);
    if (outcome.timed_out) {
      result.timed_out = true;
      break;
    }
  }

  result.positives = state.pp;
  result.negatives = state.np;
  result.covered_links = static_cast<long long>(state.pcover.size());
  if (state.pp.empty()) {
    result.final_program = make_empty();  // no links learnable
  } else {
    result.final_program = make_exclude(union_or_empty(state.pp), union_or_empty(state.np));
  }
  return result;
}

}  // namespace vrdlink
