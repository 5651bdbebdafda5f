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

#include "vrdlink/eval.hpp"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>

#include "vrdlink/errors.hpp"

namespace vrdlink {

double f1_score(double precision, double recall) {
  const double denom = precision + recall;
  if (denom <= 0.0) return 0.0;
  return 2.0 * precision * recall / denom;
}

EvaluationReport EvaluationReport::from_counts(long long tp, long long fp, long long fn) {
  EvaluationReport r;
  r.tp = tp;
  r.fp = fp;
  r.fn = fn;
  if (tp + fp > 0) {
    r.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  } else {
    r.precision_degenerate = true;
  }
  if (tp + fn > 0) {
    r.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  } else {
    r.recall_degenerate = true;
  }
  if (r.precision + r.recall > 0.0) {
    r.f1 = f1_score(r.precision, r.recall);
  } else {
    r.f1_degenerate = true;
  }
  return r;
}

EvaluationReport score(const PredictionMap& predictions, const std::vector<LinkSpec>& specs) {
  std::set<std::string> known;
  for (const LinkSpec& s : specs) known.insert(s.doc_id);
  for (const auto& [doc_id, links] : predictions) {
    if (!known.count(doc_id)) {
      throw DataError("predictions reference unknown document '" + doc_id + "'");
    }
  }

  long long tp = 0, fp = 0, fn = 0;
  std::map<std::string, DocCounts> per_doc;
  for (const LinkSpec& s : specs) {
    static const LinkSet kEmpty{};
    auto it = predictions.find(s.doc_id);
    const LinkSet& pred = it == predictions.end() ? kEmpty : it->second;
    DocCounts c;
    for (const auto& pair : pred.pairs) {
      if (s.links.count(pair)) {
        ++c.tp;
      } else {
        ++c.fp;
      }
    }
    for (const auto& pair : s.links) {
      if (!pred.pairs.count(pair)) ++c.fn;
    }
    tp += c.tp;
    fp += c.fp;
    fn += c.fn;
    per_doc.emplace(s.doc_id, c);
  }

  EvaluationReport r = EvaluationReport::from_counts(tp, fp, fn);
  r.per_doc = std::move(per_doc);
  return r;
}

PredictionMap combine(const PredictionMap& base, const PredictionMap& other,
                      const PredictionMap& negatives) {
  PredictionMap out;
  std::set<std::string> keys;
  for (const auto& [k, v] : base) keys.insert(k);
  for (const auto& [k, v] : other) keys.insert(k);
  auto get = [](const PredictionMap& m, const std::string& k) -> const LinkSet& {
    auto it = m.find(k);
    static const LinkSet empty{};
    return it == m.end() ? empty : it->second;
  };
  for (const std::string& k : keys) {
    out[k] = link_difference(link_union(get(base, k), get(other, k)), get(negatives, k));
  }
  return out;
}

nlohmann::json report_to_json(const EvaluationReport& report) {
  nlohmann::json per_doc = nlohmann::json::object();
  for (const auto& [doc, c] : report.per_doc) {
    per_doc[doc] = {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}};
  }
  return {{"tp", report.tp},
          {"fp", report.fp},
          {"fn", report.fn},
          {"precision", report.precision},
          {"recall", report.recall},
          {"f1", report.f1},
          {"degenerate",
           {{"precision", report.precision_degenerate},
            {"recall", report.recall_degenerate},
            {"f1", report.f1_degenerate}}},
          {"per_doc", per_doc}};
}

std::string report_to_table(const EvaluationReport& report) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out << std::setw(6) << "Docs" << std::setw(8) << "TP" << std::setw(8) << "FP" << std::setw(8)
      << "FN" << std::setw(8) << "Prec" << std::setw(8) << "Rec" << std::setw(8) << "F1" << "\n";
  out << std::setw(6) << report.per_doc.size() << std::setw(8) << report.tp << std::setw(8)
      << report.fp << std::setw(8) << report.fn << std::setprecision(3) << std::setw(8)
      << report.precision << std::setw(8) << report.recall << std::setw(8) << report.f1 << "\n";
  return out.str();
}

nlohmann::json predictions_to_json(const PredictionMap& predictions) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [doc, links] : predictions) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [src, dst] : links.pairs) arr.push_back({src, dst});
    j[doc] = std::move(arr);
  }
  return j;
}

PredictionMap predictions_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("predictions must be a JSON object keyed by doc id");
  PredictionMap out;
  for (const auto& [doc, arr] : j.items()) {
    if (!arr.is_array()) throw ParseError("predictions for '" + doc + "' must be an array");
    LinkSet links;
    for (const auto& pair : arr) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
          !pair[1].is_number_integer()) {
        throw ParseError("predictions for '" + doc + "' must contain [src, dst] integer pairs");
      }
      links.pairs.emplace(pair[0].get<int>(), pair[1].get<int>());
    }
    out.emplace(doc, std::move(links));
  }
  return out;
}

}  // namespace vrdlink
