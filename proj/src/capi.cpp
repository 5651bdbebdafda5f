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

#include "vrdlink.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <initializer_list>
#include <memory>
#include <sstream>
#include <string>

#include <json.hpp>

#include "vrdlink/errors.hpp"
#include "vrdlink/eval.hpp"
#include "vrdlink/funsd.hpp"
#include "vrdlink/synth.hpp"
#include "vrdlink/synthetic.hpp"

using nlohmann::json;

struct vrd_corpus {
  vrdlink::Corpus corpus;
};

struct vrd_program {
  vrdlink::ProgramPtr program;
};

struct vrd_synthesis {
  vrdlink::SynthesisResult result;
  json manifest;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
vrd_status guarded(Fn&& fn) {
  try {
    fn();
    return VRD_OK;
  } catch (const vrdlink::UsageError& e) {
    g_last_error = e.what();
    return VRD_ERR_USAGE;
  } catch (const vrdlink::DataError& e) {
    g_last_error = e.what();
    return VRD_ERR_DATA;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return VRD_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw vrdlink::UsageError(what);
}

json parse_options(const char* text, std::initializer_list<const char*> allowed) {
  if (text == nullptr || *text == '\0') return json::object();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw vrdlink::UsageError(std::string("invalid options JSON: ") + e.what());
  }
  if (!j.is_object()) throw vrdlink::UsageError("options must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) throw vrdlink::UsageError("unknown option '" + key + "'");
  }
  return j;
}

json parse_payload(const char* text, const char* what) {
  if (text == nullptr) throw vrdlink::UsageError(std::string(what) + " must not be null");
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw vrdlink::ParseError(std::string("invalid ") + what + ": " + e.what());
  }
}

vrdlink::CorpusOptions corpus_options_from(const json& j) {
  vrdlink::CorpusOptions opts;
  if (j.contains("overlap_threshold")) opts.graph.overlap_threshold = j.at("overlap_threshold").get<double>();
  if (j.contains("prune")) opts.graph.prune = j.at("prune").get<bool>();
  if (j.contains("page_width")) opts.default_width = j.at("page_width").get<int>();
  if (j.contains("page_height")) opts.default_height = j.at("page_height").get<int>();
  if (j.contains("use_tables")) opts.use_tables = j.at("use_tables").get<bool>();
  return opts;
}

json manifest_of(const vrdlink::SynthesisResult& r, const vrdlink::SynthConfig& config) {
  json signatures = json::array();
  for (const auto& sig : r.mining.signatures) {
    json labels = json::array();
    for (auto l : sig.labels) labels.push_back(vrdlink::to_string(l));
    signatures.push_back({{"labels", labels}, {"support", r.mining.support.at(sig)}});
  }
  json iterations = json::array();
  for (const auto& it : r.iterations) {
    json insertions = json::array();
    for (const auto& ins : it.insertions) {
      insertions.push_back({{"parent_precision", ins.parent_prec},
                            {"child_precision", ins.child_prec}});
    }
    iterations.push_back({{"iteration", it.iteration},
                          {"entries_in", it.entries_in},
                          {"entries_out", it.entries_out},
                          {"pp_added", it.pp_added},
                          {"np_added", it.np_added},
                          {"cover", it.cover_size},
                          {"pcover", it.pcover_size},
                          {"ncover", it.ncover_size},
                          {"insertions", insertions}});
  }
  return json{{"config",
               {{"max_iterations", config.max_iterations},
                {"max_path_len", config.max_path_len},
                {"min_support", config.min_support},
                {"timeout_seconds", config.timeout_seconds}}},
              {"mining",
               {{"total_links", r.mining.total_links},
                {"unreachable_links", r.mining.unreachable_links},
                {"signatures", signatures}}},
              {"iterations", iterations},
              {"totals",
               {{"total_links", r.total_links},
                {"covered_links", r.covered_links},
                {"positive_programs", r.positives.size()},
                {"negative_programs", r.negatives.size()},
                {"timed_out", r.timed_out}}}};
}

vrdlink::ProgramPtr part_program(const vrdlink::SynthesisResult& r, const std::string& part) {
  auto union_or_empty = [](const std::vector<vrdlink::ProgramPtr>& ps) {
    return ps.empty() ? vrdlink::make_empty() : vrdlink::make_union(ps);
  };
  if (part == "final") return r.final_program;
  if (part == "positives") return union_or_empty(r.positives);
  if (part == "negatives") return union_or_empty(r.negatives);
  throw vrdlink::UsageError("unknown program part '" + part + "'");
}

}  // namespace

extern "C" {

const char* vrd_last_error(void) { return g_last_error.c_str(); }

void vrd_string_free(char* s) { std::free(s); }

vrd_status vrd_corpus_open(const char* dir, const char* options_json, vrd_corpus** out) {
  return guarded([&] {
    require(dir != nullptr && out != nullptr, "dir and out must not be null");
    const json j = parse_options(options_json, {"overlap_threshold", "prune", "page_width",
                                                "page_height", "use_tables"});
    auto handle = std::make_unique<vrd_corpus>();
    handle->corpus = vrdlink::load_corpus(dir, corpus_options_from(j));
    *out = handle.release();
  });
}

void vrd_corpus_close(vrd_corpus* corpus) { delete corpus; }

vrd_status vrd_corpus_stats(const vrd_corpus* corpus, char** json_out) {
  return guarded([&] {
    require(corpus != nullptr && json_out != nullptr, "corpus and json_out must not be null");
    size_t entities = 0, relations = 0, links = 0;
    for (const auto& g : corpus->corpus.graphs) {
      entities += g.entities.size();
      relations += g.relations.size();
    }
    for (const auto& s : corpus->corpus.specs) links += s.links.size();
    const json j{{"docs", corpus->corpus.graphs.size()},
                 {"entities", entities},
                 {"relations", relations},
                 {"links", links},
                 {"fingerprint", vrdlink::corpus_fingerprint(corpus->corpus)}};
    *json_out = dup_string(j.dump(2) + "\n");
  });
}

vrd_status vrd_corpus_generate(const char* dir, const char* options_json,
                               char** manifest_json_out) {
  return guarded([&] {
    require(dir != nullptr, "dir must not be null");
    const json j = parse_options(options_json, {"families", "count_per_family", "seed"});
    vrdlink::SyntheticOptions opts;
    if (j.contains("families")) {
      opts.families.clear();
      for (const auto& f : j.at("families")) {
        opts.families.push_back(vrdlink::layout_family_from_string(f.get<std::string>()));
      }
    }
    if (j.contains("count_per_family")) opts.count_per_family = j.at("count_per_family").get<int>();
    if (j.contains("seed")) opts.seed = j.at("seed").get<uint64_t>();
    const auto docs = vrdlink::generate_corpus(opts);
    vrdlink::write_corpus(docs, dir);
    if (manifest_json_out != nullptr) {
      json ids = json::array();
      for (const auto& d : docs) ids.push_back(d.doc_id);
      const json manifest{{"dir", dir}, {"docs", ids}, {"count", docs.size()}};
      *manifest_json_out = dup_string(manifest.dump(2) + "\n");
    }
  });
}

vrd_status vrd_synthesize(const vrd_corpus* corpus, const char* options_json,
                          vrd_synthesis** out) {
  return guarded([&] {
    require(corpus != nullptr && out != nullptr, "corpus and out must not be null");
    const json j = parse_options(
        options_json, {"max_iterations", "max_path_len", "min_support", "timeout_seconds"});
    vrdlink::SynthConfig config;
    if (j.contains("max_iterations")) config.max_iterations = j.at("max_iterations").get<int>();
    if (j.contains("max_path_len")) config.max_path_len = j.at("max_path_len").get<int>();
    if (j.contains("min_support")) config.min_support = j.at("min_support").get<long long>();
    if (j.contains("timeout_seconds")) config.timeout_seconds = j.at("timeout_seconds").get<double>();

    auto handle = std::make_unique<vrd_synthesis>();
    handle->result = vrdlink::synthesize(corpus->corpus.graphs, corpus->corpus.specs, config);
    handle->manifest = manifest_of(handle->result, config);
    *out = handle.release();
  });
}

vrd_status vrd_synthesis_program(const vrd_synthesis* synthesis, const char* part,
                                 char** json_out) {
  return guarded([&] {
    require(synthesis != nullptr && part != nullptr && json_out != nullptr,
            "synthesis, part, and json_out must not be null");
    const auto program = part_program(synthesis->result, part);
    *json_out = dup_string(vrdlink::serialize_program(*program));
  });
}

vrd_status vrd_synthesis_manifest(const vrd_synthesis* synthesis, char** json_out) {
  return guarded([&] {
    require(synthesis != nullptr && json_out != nullptr,
            "synthesis and json_out must not be null");
    *json_out = dup_string(synthesis->manifest.dump(2) + "\n");
  });
}

void vrd_synthesis_close(vrd_synthesis* synthesis) { delete synthesis; }

vrd_status vrd_program_open(const char* path, vrd_program** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "path and out must not be null");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw vrdlink::DataError(std::string("cannot open program file '") + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    auto handle = std::make_unique<vrd_program>();
    handle->program = vrdlink::parse_program(buf.str());
    *out = handle.release();
  });
}

vrd_status vrd_program_parse(const char* text, vrd_program** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "text and out must not be null");
    auto handle = std::make_unique<vrd_program>();
    handle->program = vrdlink::parse_program(text);
    *out = handle.release();
  });
}

vrd_status vrd_program_save(const vrd_program* program, const char* path) {
  return guarded([&] {
    require(program != nullptr && path != nullptr, "program and path must not be null");
    std::ofstream outf(path, std::ios::binary | std::ios::trunc);
    if (!outf) throw vrdlink::DataError(std::string("cannot write program file '") + path + "'");
    outf << vrdlink::serialize_program(*program->program);
    if (!outf.good()) {
      throw vrdlink::DataError(std::string("failed writing program file '") + path + "'");
    }
  });
}

vrd_status vrd_program_json(const vrd_program* program, char** out) {
  return guarded([&] {
    require(program != nullptr && out != nullptr, "program and out must not be null");
    *out = dup_string(vrdlink::serialize_program(*program->program));
  });
}

vrd_status vrd_program_pretty(const vrd_program* program, char** out) {
  return guarded([&] {
    require(program != nullptr && out != nullptr, "program and out must not be null");
    *out = dup_string(vrdlink::format_program(*program->program) + "\n");
  });
}

void vrd_program_close(vrd_program* program) { delete program; }

vrd_status vrd_run(const vrd_program* program, const vrd_corpus* corpus,
                   char** predictions_json_out) {
  return guarded([&] {
    require(program != nullptr && corpus != nullptr && predictions_json_out != nullptr,
            "program, corpus, and predictions_json_out must not be null");
    vrdlink::PredictionMap predictions;
    for (const auto& g : corpus->corpus.graphs) {
      predictions[g.doc_id] = vrdlink::eval_program(*program->program, g);
    }
    *predictions_json_out = dup_string(vrdlink::predictions_to_json(predictions).dump(2) + "\n");
  });
}

vrd_status vrd_score(const char* predictions_json, const vrd_corpus* gold,
                     const char* options_json, char** report_out) {
  return guarded([&] {
    require(gold != nullptr && report_out != nullptr, "gold and report_out must not be null");
    const json opts = parse_options(options_json, {"format"});
    const std::string format = opts.value("format", "json");
    const auto predictions =
        vrdlink::predictions_from_json(parse_payload(predictions_json, "predictions JSON"));
    const auto report = vrdlink::score(predictions, gold->corpus.specs);
    if (format == "json") {
      *report_out = dup_string(vrdlink::report_to_json(report).dump(2) + "\n");
    } else if (format == "table") {
      *report_out = dup_string(vrdlink::report_to_table(report));
    } else {
      throw vrdlink::UsageError("unknown format '" + format + "'");
    }
  });
}

vrd_status vrd_combine(const char* base_json, const char* other_json,
                       const char* negatives_json, char** combined_json_out) {
  return guarded([&] {
    require(combined_json_out != nullptr, "combined_json_out must not be null");
    const auto base = vrdlink::predictions_from_json(parse_payload(base_json, "base predictions"));
    const auto other =
        vrdlink::predictions_from_json(parse_payload(other_json, "other predictions"));
    vrdlink::PredictionMap negatives;
    if (negatives_json != nullptr && *negatives_json != '\0') {
      negatives = vrdlink::predictions_from_json(parse_payload(negatives_json, "negatives"));
    }
    const auto combined = vrdlink::combine(base, other, negatives);
    *combined_json_out = dup_string(vrdlink::predictions_to_json(combined).dump(2) + "\n");
  });
}

}  // extern "C"
