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

#include "vrdlink/synthetic.hpp"

#include <fstream>
#include <random>

#include "vrdlink/errors.hpp"

namespace fs = std::filesystem;

namespace vrdlink {

namespace {

constexpr int kPageWidth = 1000;
constexpr int kPageHeight = 800;

const std::vector<std::string>& header_texts() {
  static const std::vector<std::string> v = {
      "EVENT INFORMATION SHEET", "FACILITY REQUEST FORM", "INSPECTION SUMMARY",
      "PURCHASE ORDER", "SITE SURVEY REPORT"};
  return v;
}

const std::vector<std::string>& subheader_texts() {
  static const std::vector<std::string> v = {"General Information:", "Hours:",
                                             "Billing Details:",     "Site Contact:",
                                             "Approval:",            "Schedule:"};
  return v;
}

const std::vector<std::string>& key_texts() {
  static const std::vector<std::string> v = {
      "Event Name:",  "Event Date:", "Location:",   "Contact:",    "Phone No.:",
      "Approved By:", "Division:",   "Region:",     "Budget Code:", "Reviewed By:",
      "Start Time:",  "End Time:",   "Department:", "Reference:",  "Status:"};
  return v;
}

const std::vector<std::string>& value_texts() {
  static const std::vector<std::string> v = {
      "Spring Festival", "May 5-7",    "Town Hall",  "J. Marsh",  "555-0117",
      "R. Alvarez",      "North",      "B-1142",     "9am-5pm",   "Closed",
      "N/A",             "Pending",    "Approved",   "12/04",     "Suite 210",
      "Dist. 7",         "K. Osei",    "On file",    "See attached", "None"};
  return v;
}

const std::vector<std::string>& long_value_texts() {
  static const std::vector<std::string> v = {
      "Deliver all materials to the loading dock on the east side of the building",
      "Contractor must provide proof of insurance before work may begin on site",
      "All visitors are required to sign in at the front desk and wear a badge",
      "Payment is due within thirty days of the invoice date unless agreed otherwise",
      "Access to the server room is restricted to authorized personnel only"};
  return v;
}

const std::vector<std::string>& other_texts() {
  static const std::vector<std::string> v = {"Page 1 of 1", "CONFIDENTIAL", "Form 27-B",
                                             "Rev. 3/2019", "Internal use only"};
  return v;
}

// Plain bounded draw; std::uniform_int_distribution is avoided so the byte
// stream stays stable regardless of library internals.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  int below(int n) { return n <= 1 ? 0 : static_cast<int>(engine_() % static_cast<uint64_t>(n)); }
  int range(int lo, int hi) { return lo + below(hi - lo + 1); }  // inclusive
  bool chance(int percent) { return below(100) < percent; }
  template <typename T>
  const T& pick(const std::vector<T>& pool) {
    return pool[static_cast<size_t>(below(static_cast<int>(pool.size())))];
  }

 private:
  std::mt19937_64 engine_;
};

struct EntityDraft {
  int id;
  std::string text;
  int x0, y0, x1, y1;
  std::string label;
  std::vector<std::pair<int, int>> links;  // filled later per endpoint
};

class DocBuilder {
 public:
  int add(std::string text, int x0, int y0, int x1, int y1, std::string label) {
    const int id = static_cast<int>(entities_.size());
    entities_.push_back({id, std::move(text), x0, y0, x1, y1, std::move(label), {}});
    return id;
  }

  void link(int src, int dst) {
    // FUNSD keeps each link on both endpoints; the loader dedupes.
    entities_[static_cast<size_t>(src)].links.emplace_back(src, dst);
    entities_[static_cast<size_t>(dst)].links.emplace_back(src, dst);
  }

  nlohmann::json form() const {
    nlohmann::json form = nlohmann::json::array();
    for (const EntityDraft& e : entities_) {
      nlohmann::json linking = nlohmann::json::array();
      for (const auto& [s, d] : e.links) linking.push_back({s, d});
      form.push_back({{"id", e.id},
                      {"text", e.text},
                      {"box", {e.x0, e.y0, e.x1, e.y1}},
                      {"label", e.label},
                      {"linking", linking}});
    }
    return {{"form", form}};
  }

 private:
  std::vector<EntityDraft> entities_;
};

// One key/value row; returns (key_id, value_id). Geometry keeps the pair's
// center distance under 0.2 of the page scale.
std::pair<int, int> add_kv_row(DocBuilder& doc, Rng& rng, int x, int y) {
  const int kw = rng.range(120, 150);
  const int vw = rng.range(120, 170);
  const int h = rng.range(26, 30);
  const int gap = rng.range(12, 24);
  const int vy = y + rng.range(-3, 3);
  const int key = doc.add(rng.pick(key_texts()), x, y, x + kw, y + h, "question");
  const int val =
      doc.add(rng.pick(value_texts()), x + kw + gap, vy, x + kw + gap + vw, vy + h, "answer");
  doc.link(key, val);
  return {key, val};
}

nlohmann::json build_flat(Rng& rng) {
  DocBuilder doc;
  const int rows = rng.range(4, 7);
  int y = rng.range(80, 110);
  for (int i = 0; i < rows; ++i) {
    add_kv_row(doc, rng, 60 + rng.range(0, 10), y);
    y += rng.range(55, 70);
  }
  if (rng.chance(40)) {
    doc.add(rng.pick(other_texts()), 60, y + 10, 700, y + 36, "other");
  }
  return doc.form();
}

nlohmann::json build_grouped(Rng& rng) {
  DocBuilder doc;
  const int header =
      doc.add(rng.pick(header_texts()), 150 + rng.range(0, 20), 40, 850 - rng.range(0, 20), 80,
              "header");
  const int group_x[2] = {60, 540};
  const int group_w = 400;
  for (int g = 0; g < 2; ++g) {
    const int gx = group_x[g] + rng.range(0, 8);
    const int sub = doc.add(rng.pick(subheader_texts()), gx, 120, gx + group_w - rng.range(0, 12),
                            155, "header");
    doc.link(header, sub);
    int y = 185;
    for (int row = 0; row < 2; ++row) {
      const int kw = rng.range(130, 160);
      const int h = 30;
      const int key = doc.add(rng.pick(key_texts()), gx, y, gx + kw, y + h, "question");
      const int vx = gx + kw + rng.range(16, 24);
      const int val = doc.add(rng.pick(value_texts()), vx, y + rng.range(-2, 2),
                              vx + rng.range(140, 170), y + h + rng.range(-2, 2), "answer");
      doc.link(sub, key);
      doc.link(key, val);
      y += rng.range(52, 60);
    }
  }
  return doc.form();
}

nlohmann::json build_long_value(Rng& rng) {
  DocBuilder doc;
  const int blocks = rng.range(3, 5);
  int y = rng.range(70, 100);
  for (int i = 0; i < blocks; ++i) {
    const int key =
        doc.add(rng.pick(key_texts()), 60, y, 60 + rng.range(160, 200), y + 28, "question");
    const int vy = y + 40;
    const int val = doc.add(rng.pick(long_value_texts()), 60, vy, 600 + rng.range(0, 40), vy + 56,
                            "answer");
    doc.link(key, val);
    y = vy + 56 + rng.range(32, 44);
  }
  return doc.form();
}

std::pair<nlohmann::json, nlohmann::json> build_table(Rng& rng) {
  DocBuilder doc;
  nlohmann::json cells = nlohmann::json::array();
  const int rows = rng.range(3, 6);
  int y = rng.range(90, 120);
  for (int r = 0; r < rows; ++r) {
    // Cells staggered vertically so plain spatial alignment misses the row.
    const int st = (r % 2 == 0 ? 1 : -1) * rng.range(22, 28);
    const int q = doc.add(rng.pick(key_texts()), 100, y, 450 - rng.range(0, 20), y + 30,
                          "question");
    const int a = doc.add(rng.pick(value_texts()), 550, y + st, 900 - rng.range(0, 20),
                          y + st + 30, "answer");
    doc.link(q, a);
    cells.push_back({{"entity_id", q}, {"table", 0}, {"row", r}, {"col", 0}});
    cells.push_back({{"entity_id", a}, {"table", 0}, {"row", r}, {"col", 1}});
    y += 90;
  }
  return {doc.form(), cells};
}

std::string doc_name(LayoutFamily family, int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "_%03d", index);
  return std::string(to_string(family)) + buf;
}

}  // namespace

const char* to_string(LayoutFamily family) {
  switch (family) {
    case LayoutFamily::Flat:
      return "flat";
    case LayoutFamily::Grouped:
      return "grouped";
    case LayoutFamily::LongValue:
      return "longvalue";
    case LayoutFamily::Table:
      return "table";
  }
  return "flat";
}

LayoutFamily layout_family_from_string(const std::string& s) {
  if (s == "flat") return LayoutFamily::Flat;
  if (s == "grouped") return LayoutFamily::Grouped;
  if (s == "longvalue") return LayoutFamily::LongValue;
  if (s == "table") return LayoutFamily::Table;
  throw UsageError("unknown layout family '" + s + "'");
}

std::vector<SyntheticDoc> generate_corpus(const SyntheticOptions& options) {
  if (options.count_per_family <= 0) throw UsageError("count must be positive");
  std::vector<SyntheticDoc> docs;
  for (LayoutFamily family : options.families) {
    for (int i = 0; i < options.count_per_family; ++i) {
      // Independent stream per document so corpora of different sizes share
      // a prefix: doc k looks the same whether 5 or 50 docs are generated.
      const uint64_t doc_seed = options.seed * 0x9e3779b97f4a7c15ull +
                                static_cast<uint64_t>(family) * 0x100000001b3ull +
                                static_cast<uint64_t>(i);
      Rng rng(doc_seed);
      SyntheticDoc doc;
      doc.doc_id = doc_name(family, i);
      doc.width = kPageWidth;
      doc.height = kPageHeight;
      doc.tables = nullptr;
      switch (family) {
        case LayoutFamily::Flat:
          doc.funsd = build_flat(rng);
          break;
        case LayoutFamily::Grouped:
          doc.funsd = build_grouped(rng);
          break;
        case LayoutFamily::LongValue:
          doc.funsd = build_long_value(rng);
          break;
        case LayoutFamily::Table: {
          auto [form, cells] = build_table(rng);
          doc.funsd = std::move(form);
          doc.tables = std::move(cells);
          break;
        }
      }
      docs.push_back(std::move(doc));
    }
  }
  return docs;
}

void write_corpus(const std::vector<SyntheticDoc>& docs, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create directory " + dir.string() + ": " + ec.message());
  for (const SyntheticDoc& doc : docs) {
    auto write = [&dir](const std::string& name, const nlohmann::json& j) {
      const fs::path path = dir / name;
      std::ofstream out(path);
      if (!out) throw DataError("cannot write " + path.string());
      out << j.dump(1) << "\n";
    };
    write(doc.doc_id + ".json", doc.funsd);
    write(doc.doc_id + ".size.json", {{"width", doc.width}, {"height", doc.height}});
    if (!doc.tables.is_null()) write(doc.doc_id + ".tables.json", doc.tables);
  }
}

}  // namespace vrdlink
