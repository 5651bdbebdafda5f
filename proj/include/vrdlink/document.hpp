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

#include <cstdint>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

namespace vrdlink {

enum class EntityLabel : uint8_t { Header = 0, Question = 1, Answer = 2, Other = 3 };

enum class RelationLabel : uint8_t { Top = 0, Down = 1, Left = 2, Right = 3, Row = 4, Col = 5 };

constexpr int kEntityLabelCount = 4;
constexpr int kRelationLabelCount = 6;

const char* to_string(EntityLabel label);
const char* to_string(RelationLabel label);
EntityLabel entity_label_from_string(const std::string& s);      // throws ParseError
RelationLabel relation_label_from_string(const std::string& s);  // throws ParseError

// FUNSD label mapping: header/question/answer (any case) keep their
// identity, everything else collapses to Other.
EntityLabel entity_label_from_funsd(const std::string& s);

// A text box on a page. Coordinates are normalized to [0, 1] by the
// larger page dimension, so aspect ratio is preserved.
struct Entity {
  int id = 0;
  std::string text;
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
  EntityLabel label = EntityLabel::Other;

  double center_x() const { return (x0 + x1) / 2.0; }
  double center_y() const { return (y0 + y1) / 2.0; }
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
};

// A directed, labeled edge between two entities. `mag` is the L1 distance
// between the endpoint centers and is fully determined by the entities.
struct Relation {
  int from_id = 0;
  int to_id = 0;
  RelationLabel label = RelationLabel::Top;
  double mag = 0.0;
};

struct GraphConfig {
  // Two boxes count as aligned on an axis when their projections onto the
  // other axis overlap by at least this fraction of the smaller interval.
  double overlap_threshold = 0.5;
  // Drop a relation A->C when some B has A->B and B->C with the same label.
  bool prune = true;
};

struct DocumentGraph {
  std::string doc_id;
  std::vector<Entity> entities;
  std::vector<Relation> relations;

  const Entity* entity_by_id(int id) const;
  int entity_index(int id) const;  // -1 when absent
  void rebuild_index();

 private:
  std::unordered_map<int, int> id_to_index_;
};

// Ground-truth directed links of one document.
struct LinkSpec {
  std::string doc_id;
  std::set<std::pair<int, int>> links;
};

// One row/column membership record from a table annotation file.
struct TableCell {
  int entity_id = 0;
  int table = 0;
  int row = 0;
  int col = 0;
};

double relation_magnitude(const Entity& from, const Entity& to);

// Throws DataError on duplicate ids, inverted boxes or coordinates
// outside [0, 1].
void validate_entities(const std::vector<Entity>& entities);

// Builds the spatial relation graph (Top/Down/Left/Right) over validated
// entities. Deterministic: relations come out sorted by (from, to, label).
DocumentGraph build_graph(std::string doc_id, std::vector<Entity> entities,
                          const GraphConfig& config = {});

// Adds symmetric Row/Col relations between entities sharing a table row or
// column. Existing (from, to, label) triples are never duplicated.
DocumentGraph add_table_relations(DocumentGraph graph, const std::vector<TableCell>& cells);

// Versioned JSON round-trip for caching built graphs.
nlohmann::json graph_to_json(const DocumentGraph& graph);
DocumentGraph graph_from_json(const nlohmann::json& j);

}  // namespace vrdlink
