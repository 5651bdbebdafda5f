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

#include "vrdlink/funsd.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "vrdlink/errors.hpp"

namespace fs = std::filesystem;

namespace vrdlink {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

nlohmann::json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

// Page size: sidecar wins, then configured default, otherwise an error.
std::pair<double, double> page_size(const fs::path& doc_path, const CorpusOptions& options) {
  fs::path sidecar = doc_path;
  sidecar.replace_extension();  // strip .json
  sidecar += ".size.json";
  if (fs::exists(sidecar)) {
    const nlohmann::json j = read_json_file(sidecar);
    if (!j.contains("width") || !j.contains("height")) {
      throw DataError(sidecar.string() + " must contain width and height");
    }
    const double w = j["width"].get<double>();
    const double h = j["height"].get<double>();
    if (w <= 0 || h <= 0) throw DataError(sidecar.string() + " has a non-positive page size");
    return {w, h};
  }
  if (options.default_width && options.default_height) {
    return {static_cast<double>(*options.default_width),
            static_cast<double>(*options.default_height)};
  }
  throw DataError("no page size for " + doc_path.string() +
                  " (missing .size.json sidecar and no default configured)");
}

std::vector<TableCell> read_tables(const fs::path& doc_path) {
  fs::path tables = doc_path;
  tables.replace_extension();
  tables += ".tables.json";
  if (!fs::exists(tables)) return {};
  const nlohmann::json j = read_json_file(tables);
  if (!j.is_array()) throw DataError(tables.string() + " must be a JSON array");
  std::vector<TableCell> cells;
  for (const auto& jc : j) {
    try {
      TableCell c;
      c.entity_id = jc.at("entity_id").get<int>();
      c.table = jc.at("table").get<int>();
      c.row = jc.at("row").get<int>();
      c.col = jc.at("col").get<int>();
      cells.push_back(c);
    } catch (const nlohmann::json::exception& e) {
      throw DataError("bad table annotation in " + tables.string() + ": " + e.what());
    }
  }
  return cells;
}

std::pair<Document, LinkSpec> load_one(const fs::path& path, const CorpusOptions& options) {
  const nlohmann::json j = read_json_file(path);
  if (!j.contains("form") || !j["form"].is_array()) {
    throw DataError(path.string() + ": missing top-level \"form\" array");
  }
  const auto [page_w, page_h] = page_size(path, options);
  const double scale = std::max(page_w, page_h);

  Document doc;
  doc.doc_id = path.stem().string();
  LinkSpec spec;
  spec.doc_id = doc.doc_id;

  std::set<int> ids;
  for (const auto& je : j["form"]) {
    Entity e;
    try {
      e.id = je.at("id").get<int>();
      e.text = je.at("text").get<std::string>();
      const auto& box = je.at("box");
      if (!box.is_array() || box.size() != 4) {
        throw DataError(path.string() + ": entity box must have 4 numbers");
      }
      const double bx0 = box[0].get<double>();
      const double by0 = box[1].get<double>();
      const double bx1 = box[2].get<double>();
      const double by1 = box[3].get<double>();
      if (bx0 > bx1 || by0 > by1) {
        throw DataError(path.string() + ": entity " + std::to_string(e.id) +
                        " has an inverted box");
      }
      if (bx0 < 0 || by0 < 0 || bx1 > page_w || by1 > page_h) {
        throw DataError(path.string() + ": entity " + std::to_string(e.id) +
                        " box is outside the page");
      }
      e.x0 = bx0 / scale;
      e.y0 = by0 / scale;
      e.x1 = bx1 / scale;
      e.y1 = by1 / scale;
      e.label = entity_label_from_funsd(je.at("label").get<std::string>());
    } catch (const nlohmann::json::exception& ex) {
      throw DataError(path.string() + ": bad form entry: " + ex.what());
    }
    if (!ids.insert(e.id).second) {
      throw DataError(path.string() + ": duplicate entity id " + std::to_string(e.id));
    }
    doc.entities.push_back(std::move(e));
  }

  // Links are stored redundantly on both endpoints in FUNSD; dedupe here.
  for (const auto& je : j["form"]) {
    if (!je.contains("linking")) continue;
    const auto& linking = je["linking"];
    if (!linking.is_array()) throw DataError(path.string() + ": linking must be an array");
    for (const auto& pair : linking) {
      if (!pair.is_array() || pair.size() != 2) {
        throw DataError(path.string() + ": each linking entry must be a [src, dst] pair");
      }
      int src = 0, dst = 0;
      try {
        src = pair[0].get<int>();
        dst = pair[1].get<int>();
      } catch (const nlohmann::json::exception& ex) {
        throw DataError(path.string() + ": bad linking entry: " + ex.what());
      }
      if (!ids.count(src) || !ids.count(dst)) {
        throw DataError(path.string() + ": linking references unknown entity id " +
                        std::to_string(ids.count(src) ? dst : src));
      }
      spec.links.emplace(src, dst);
    }
  }

  if (options.use_tables) {
    doc.tables = read_tables(path);
    for (const TableCell& c : doc.tables) {
      if (!ids.count(c.entity_id)) {
        throw DataError(path.string() + ": table annotation references unknown entity id " +
                        std::to_string(c.entity_id));
      }
    }
  }
  return {std::move(doc), std::move(spec)};
}

}  // namespace

std::pair<std::vector<Document>, std::vector<LinkSpec>> load_funsd(const fs::path& dir,
                                                                   const CorpusOptions& options) {
  if (!fs::exists(dir) || !fs::is_directory(dir)) {
    throw DataError("document directory not found: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (!ends_with(name, ".json")) continue;
    if (ends_with(name, ".size.json") || ends_with(name, ".tables.json")) continue;
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DataError("no FUNSD documents in " + dir.string());

  std::vector<Document> docs;
  std::vector<LinkSpec> specs;
  docs.reserve(files.size());
  specs.reserve(files.size());
  for (const fs::path& f : files) {
    auto [doc, spec] = load_one(f, options);
    docs.push_back(std::move(doc));
    specs.push_back(std::move(spec));
  }
  return {std::move(docs), std::move(specs)};
}

Corpus load_corpus(const fs::path& dir, const CorpusOptions& options) {
  auto [docs, specs] = load_funsd(dir, options);
  Corpus corpus;
  corpus.specs = std::move(specs);
  corpus.graphs.reserve(docs.size());
  for (Document& doc : docs) {
    DocumentGraph g = build_graph(doc.doc_id, std::move(doc.entities), options.graph);
    if (options.use_tables && !doc.tables.empty()) {
      g = add_table_relations(std::move(g), doc.tables);
    }
    corpus.graphs.push_back(std::move(g));
  }
  return corpus;
}

std::string corpus_fingerprint(const Corpus& corpus) {
  uint64_t h = 1469598103934665603ull;  // FNV-1a offset basis
  auto mix = [&h](const void* data, size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ull;
    }
  };
  auto mix_str = [&](const std::string& s) { mix(s.data(), s.size()); };
  auto mix_int = [&](int64_t v) { mix(&v, sizeof(v)); };
  auto mix_dbl = [&](double v) { mix(&v, sizeof(v)); };

  for (const DocumentGraph& g : corpus.graphs) {
    mix_str(g.doc_id);
    for (const Entity& e : g.entities) {
      mix_int(e.id);
      mix_str(e.text);
      mix_dbl(e.x0);
      mix_dbl(e.y0);
      mix_dbl(e.x1);
      mix_dbl(e.y1);
      mix_int(static_cast<int>(e.label));
    }
    for (const Relation& r : g.relations) {
      mix_int(r.from_id);
      mix_int(r.to_id);
      mix_int(static_cast<int>(r.label));
      mix_dbl(r.mag);
    }
  }
  for (const LinkSpec& s : corpus.specs) {
    mix_str(s.doc_id);
    for (const auto& [a, b] : s.links) {
      mix_int(a);
      mix_int(b);
    }
  }
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

}  // namespace vrdlink
