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

#include <map>
#include <string>

#include <json.hpp>

#include "vrdlink/interp.hpp"

namespace vrdlink {

using PredictionMap = std::map<std::string, LinkSet>;

struct DocCounts {
  long long tp = 0;
  long long fp = 0;
  long long fn = 0;
};

struct EvaluationReport {
  long long tp = 0;
  long long fp = 0;
  long long fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // Set when a zero denominator forced the corresponding metric to 0.
  bool precision_degenerate = false;
  bool recall_degenerate = false;
  bool f1_degenerate = false;
  std::map<std::string, DocCounts> per_doc;

  static EvaluationReport from_counts(long long tp, long long fp, long long fn);
};

// 2pr/(p+r), 0 when p + r == 0.
double f1_score(double precision, double recall);

// Micro-averaged scoring over the corpus. Documents present in the gold
// specs but absent from `predictions` count all their links as misses.
// Unknown doc ids in `predictions` raise DataError.
EvaluationReport score(const PredictionMap& predictions, const std::vector<LinkSpec>& specs);

// Per-document (base ∪ other) ∖ negatives over the union of doc keys.
PredictionMap combine(const PredictionMap& base, const PredictionMap& other,
                      const PredictionMap& negatives);

nlohmann::json report_to_json(const EvaluationReport& report);
std::string report_to_table(const EvaluationReport& report);

nlohmann::json predictions_to_json(const PredictionMap& predictions);
PredictionMap predictions_from_json(const nlohmann::json& j);

}  // namespace vrdlink
