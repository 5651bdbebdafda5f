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

#include "vrdlink/document.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "vrdlink/errors.hpp"

namespace vrdlink {

namespace {

std::string lowercase(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Overlap test between [a0,a1] and [b0,b1] relative to the smaller interval.
bool projections_aligned(double a0, double a1, double b0, double b1, double threshold) {
  const double overlap = std::min(a1, b1) - std::max(a0, b0);
  if (overlap < 0.0) return false;
  const double smaller = std::min(a1 - a0, b1 - b0);
  if (smaller <= 0.0) return true;  // degenerate interval: touching counts
  return overlap >= threshold * smaller;
}

bool relation_less(const Relation& a, const Relation& b) {
  return std::tie(a.from_id, a.to_id, a.label) < std::tie(b.from_id, b.to_id, b.label);
}

}  // namespace

const char* to_string(EntityLabel label) {
  switch (label) {
    case EntityLabel::Header:
      return "header";
    case EntityLabel::Question:
      return "question";
    case EntityLabel::Answer:
      return "answer";
    case EntityLabel::Other:
      return "other";
  }
  return "other";
}

const char* to_string(RelationLabel label) {
  switch (label) {
    case RelationLabel::Top:
      return "top";
    case RelationLabel::Down:
      return "down";
    case RelationLabel::Left:
      return "left";
    case RelationLabel::Right:
      return "right";
    case RelationLabel::Row:
      return "row";
    case RelationLabel::Col:
      return "col";
  }
  return "top";
}

EntityLabel entity_label_from_string(const std::string& s) {
  const std::string v = lowercase(s);
  if (v == "header") return EntityLabel::Header;
  if (v == "question") return EntityLabel::Question;
  if (v == "answer") return EntityLabel::Answer;
  if (v == "other") return EntityLabel::Other;
  throw ParseError("unknown entity label '" + s + "'");
}

RelationLabel relation_label_from_string(const std::string& s) {
  const std::string v = lowercase(s);
  if (v == "top") return RelationLabel::Top;
  if (v == "down") return RelationLabel::Down;
  if (v == "left") return RelationLabel::Left;
  if (v == "right") return RelationLabel::Right;
  if (v == "row") return RelationLabel::Row;
  if (v == "col") return RelationLabel::Col;
  throw ParseError("unknown relation label '" + s + "'");
}

EntityLabel entity_label_from_funsd(const std::string& s) {
  const std::string v = lowercase(s);
  if (v == "header") return EntityLabel::Header;
  if (v == "question") return EntityLabel::Question;
  if (v == "answer") return EntityLabel::Answer;
  return EntityLabel::Other;
}

const Entity* DocumentGraph::entity_by_id(int id) const {
  const int idx = entity_index(id);
  return idx < 0 ? nullptr : &entities[static_cast<size_t>(idx)];
}

int DocumentGraph::entity_index(int id) const {
  auto it = id_to_index_.find(id);
  return it == id_to_index_.end() ? -1 : it->second;
}

void DocumentGraph::rebuild_index() {
  id_to_index_.clear();
  id_to_index_.reserve(entities.size());
  for (size_t i = 0; i < entities.size(); ++i) {
    id_to_index_.emplace(entities[i].id, static_cast<int>(i));
  }
}

double relation_magnitude(const Entity& from, const Entity& to) {
  return std::abs(from.center_x() - to.center_x()) + std::abs(from.center_y() - to.center_y());
}

void validate_entities(const std::vector<Entity>& entities) {
  std::set<int> seen;
  for (const Entity& e : entities) {
    if (!seen.insert(e.id).second) {
      throw DataError("duplicate entity id " + std::to_string(e.id));
    }
    if (!(e.x0 <= e.x1) || !(e.y0 <= e.y1)) {
      throw DataError("entity " + std::to_string(e.id) + " has an inverted box");
    }
    const double lo = std::min(std::min(e.x0, e.y0), std::min(e.x1, e.y1));
    const double hi = std::max(std::max(e.x0, e.y0), std::max(e.x1, e.y1));
    if (lo < 0.0 || hi > 1.0) {
      throw DataError("entity " + std::to_string(e.id) +
                      " has coordinates outside the unit square");
    }
  }
}

DocumentGraph build_graph(std::string doc_id, std::vector<Entity> entities,
                          const GraphConfig& config) {
  validate_entities(entities);

  std::vector<Relation> rels;
  const size_t n = entities.size();
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const Entity& a = entities[i];
      const Entity& b = entities[j];
      // Horizontal neighbors: vertical projections overlap enough and the
      // centers are not on the same vertical line.
      if (projections_aligned(a.y0, a.y1, b.y0, b.y1, config.overlap_threshold) &&
          a.center_x() != b.center_x()) {
        const Entity& left = a.center_x() < b.center_x() ? a : b;
        const Entity& right = a.center_x() < b.center_x() ? b : a;
        const double mag = relation_magnitude(left, right);
        rels.push_back({left.id, right.id, RelationLabel::Right, mag});
        rels.push_back({right.id, left.id, RelationLabel::Left, mag});
      }
      // Vertical neighbors.
      if (projections_aligned(a.x0, a.x1, b.x0, b.x1, config.overlap_threshold) &&
          a.center_y() != b.center_y()) {
        const Entity& upper = a.center_y() < b.center_y() ? a : b;
        const Entity& lower = a.center_y() < b.center_y() ? b : a;
        const double mag = relation_magnitude(upper, lower);
        rels.push_back({upper.id, lower.id, RelationLabel::Down, mag});
        rels.push_back({lower.id, upper.id, RelationLabel::Top, mag});
      }
    }
  }

  if (config.prune) {
    // Transitive reduction per label over the full pre-pruning edge set:
    // A->C goes away when A->B->C exists with the same label.
    std::set<std::tuple<int, int, RelationLabel>> present;
    for (const Relation& r : rels) present.emplace(r.from_id, r.to_id, r.label);
    std::vector<Relation> kept;
    kept.reserve(rels.size());
    for (const Relation& r : rels) {
      bool bridged = false;
      for (const Relation& mid : rels) {
        if (mid.label != r.label || mid.from_id != r.from_id || mid.to_id == r.to_id) continue;
        if (present.count({mid.to_id, r.to_id, r.label})) {
          bridged = true;
          break;
        }
      }
      if (!bridged) kept.push_back(r);
    }
    rels = std::move(kept);
  }

  std::sort(rels.begin(), rels.end(), relation_less);

  DocumentGraph g;
  g.doc_id = std::move(doc_id);
  g.entities = std::move(entities);
  g.relations = std::move(rels);
  g.rebuild_index();
  return g;
}

DocumentGraph add_table_relations(DocumentGraph graph, const std::vector<TableCell>& cells) {
  std::set<std::tuple<int, int, RelationLabel>> present;
  for (const Relation& r : graph.relations) present.emplace(r.from_id, r.to_id, r.label);

  for (const TableCell& c : cells) {
    if (graph.entity_by_id(c.entity_id) == nullptr) {
      throw DataError("table annotation references unknown entity id " +
                      std::to_string(c.entity_id));
    }
  }

  auto connect = [&](const TableCell& a, const TableCell& b, RelationLabel label) {
    const Entity* ea = graph.entity_by_id(a.entity_id);
    const Entity* eb = graph.entity_by_id(b.entity_id);
    const double mag = relation_magnitude(*ea, *eb);
    if (present.emplace(ea->id, eb->id, label).second) {
      graph.relations.push_back({ea->id, eb->id, label, mag});
    }
    if (present.emplace(eb->id, ea->id, label).second) {
      graph.relations.push_back({eb->id, ea->id, label, mag});
    }
  };

  for (size_t i = 0; i < cells.size(); ++i) {
    for (size_t j = i + 1; j < cells.size(); ++j) {
      const TableCell& a = cells[i];
      const TableCell& b = cells[j];
      if (a.entity_id == b.entity_id || a.table != b.table) continue;
      if (a.row == b.row) connect(a, b, RelationLabel::Row);
      if (a.col == b.col) connect(a, b, RelationLabel::Col);
    }
  }

  std::sort(graph.relations.begin(), graph.relations.end(), relation_less);
  graph.rebuild_index();
  return graph;
}

nlohmann::json graph_to_json(const DocumentGraph& graph) {
  nlohmann::json entities = nlohmann::json::array();
  for (const Entity& e : graph.entities) {
    entities.push_back({{"id", e.id},
                        {"text", e.text},
                        {"box", {e.x0, e.y0, e.x1, e.y1}},
                        {"label", to_string(e.label)}});
  }
  nlohmann::json relations = nlohmann::json::array();
  for (const Relation& r : graph.relations) {
    relations.push_back(
        {{"from", r.from_id}, {"to", r.to_id}, {"label", to_string(r.label)}, {"mag", r.mag}});
  }
  return {{"format", "vrdlink-graph"},
          {"version", 1},
          {"doc_id", graph.doc_id},
          {"entities", entities},
          {"relations", relations}};
}

DocumentGraph graph_from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", "vrdlink-graph") != std::string("vrdlink-graph")) {
      throw ParseError("not a vrdlink-graph document");
    }
    if (j.value("version", 1) != 1) {
      throw ParseError("unsupported graph format version");
    }
    DocumentGraph g;
    g.doc_id = j.at("doc_id").get<std::string>();
    for (const auto& je : j.at("entities")) {
      Entity e;
      e.id = je.at("id").get<int>();
      e.text = je.at("text").get<std::string>();
      const auto& box = je.at("box");
      if (!box.is_array() || box.size() != 4) throw ParseError("entity box must have 4 numbers");
      e.x0 = box[0].get<double>();
      e.y0 = box[1].get<double>();
      e.x1 = box[2].get<double>();
      e.y1 = box[3].get<double>();
      e.label = entity_label_from_string(je.at("label").get<std::string>());
      g.entities.push_back(std::move(e));
    }
    validate_entities(g.entities);
    g.rebuild_index();
    std::set<std::tuple<int, int, RelationLabel>> present;
    for (const auto& jr : j.at("relations")) {
      Relation r;
      r.from_id = jr.at("from").get<int>();
      r.to_id = jr.at("to").get<int>();
      r.label = relation_label_from_string(jr.at("label").get<std::string>());
      r.mag = jr.at("mag").get<double>();
      if (g.entity_by_id(r.from_id) == nullptr || g.entity_by_id(r.to_id) == nullptr) {
        throw ParseError("relation references unknown entity id");
      }
      if (r.from_id == r.to_id) throw ParseError("relation endpoints must differ");
      if (!present.emplace(r.from_id, r.to_id, r.label).second) {
        throw ParseError("duplicate relation triple");
      }
      g.relations.push_back(r);
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed graph JSON: ") + e.what());
  }
}

}  // namespace vrdlink
