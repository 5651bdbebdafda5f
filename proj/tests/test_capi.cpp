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

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <json.hpp>

#include "vrdlink.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path = fs::temp_directory_path() / ("vrdlink-capi-" + std::to_string(rng()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

// Takes ownership of a C string result.
std::string take(char* s) {
  REQUIRE(s != nullptr);
  std::string out(s);
  vrd_string_free(s);
  return out;
}

struct CorpusCloser {
  vrd_corpus* c = nullptr;
  ~CorpusCloser() { vrd_corpus_close(c); }
};
struct ProgramCloser {
  vrd_program* p = nullptr;
  ~ProgramCloser() { vrd_program_close(p); }
};
struct SynthesisCloser {
  vrd_synthesis* s = nullptr;
  ~SynthesisCloser() { vrd_synthesis_close(s); }
};

}  // namespace

TEST_CASE("full pipeline through the C surface") {
  TempDir dir;
  char* manifest_raw = nullptr;
  REQUIRE(vrd_corpus_generate(dir.path.c_str(),
                              R"({"families":["flat"],"count_per_family":4,"seed":13})",
                              &manifest_raw) == VRD_OK);
  const json manifest = json::parse(take(manifest_raw));
  CHECK(manifest["count"] == 4);
  CHECK(manifest["docs"].size() == 4);

  CorpusCloser corpus;
  REQUIRE(vrd_corpus_open(dir.path.c_str(), nullptr, &corpus.c) == VRD_OK);

  char* stats_raw = nullptr;
  REQUIRE(vrd_corpus_stats(corpus.c, &stats_raw) == VRD_OK);
  const json stats = json::parse(take(stats_raw));
  CHECK(stats["docs"] == 4);
  CHECK(stats["links"].get<int>() > 0);
  CHECK(stats["fingerprint"].is_string());

  SynthesisCloser synth;
  REQUIRE(vrd_synthesize(corpus.c, R"({"max_iterations":3})", &synth.s) == VRD_OK);

  char* final_raw = nullptr;
  REQUIRE(vrd_synthesis_program(synth.s, "final", &final_raw) == VRD_OK);
  const std::string final_text = take(final_raw);

  char* synth_manifest_raw = nullptr;
  REQUIRE(vrd_synthesis_manifest(synth.s, &synth_manifest_raw) == VRD_OK);
  const json sm = json::parse(take(synth_manifest_raw));
  CHECK(sm["totals"]["covered_links"] == sm["totals"]["total_links"]);
  CHECK(sm["totals"]["positive_programs"].get<int>() >= 1);
  CHECK(sm["mining"]["signatures"].is_array());
  CHECK(sm["iterations"].is_array());

  // Round-trip the program through parse / save / open / json.
  ProgramCloser parsed;
  REQUIRE(vrd_program_parse(final_text.c_str(), &parsed.p) == VRD_OK);
  const fs::path prog_path = dir.path / "prog.json";
  REQUIRE(vrd_program_save(parsed.p, prog_path.c_str()) == VRD_OK);
  ProgramCloser reopened;
  REQUIRE(vrd_program_open(prog_path.c_str(), &reopened.p) == VRD_OK);
  char* json_raw = nullptr;
  REQUIRE(vrd_program_json(reopened.p, &json_raw) == VRD_OK);
  CHECK(take(json_raw) == final_text);
  char* pretty_raw = nullptr;
  REQUIRE(vrd_program_pretty(reopened.p, &pretty_raw) == VRD_OK);
  CHECK_FALSE(take(pretty_raw).empty());

  // Run on the training corpus and score: flat is fully learnable.
  char* preds_raw = nullptr;
  REQUIRE(vrd_run(reopened.p, corpus.c, &preds_raw) == VRD_OK);
  const std::string preds = take(preds_raw);

  char* report_raw = nullptr;
  REQUIRE(vrd_score(preds.c_str(), corpus.c, nullptr, &report_raw) == VRD_OK);
  const json report = json::parse(take(report_raw));
  CHECK(report["fp"] == 0);
  CHECK(report["fn"] == 0);
  CHECK(report["precision"].get<double>() == doctest::Approx(1.0));

  char* table_raw = nullptr;
  REQUIRE(vrd_score(preds.c_str(), corpus.c, R"({"format":"table"})", &table_raw) == VRD_OK);
  CHECK(take(table_raw).find("Prec") != std::string::npos);

  // Determinism across runs of the whole pipeline.
  SynthesisCloser synth2;
  REQUIRE(vrd_synthesize(corpus.c, R"({"max_iterations":3})", &synth2.s) == VRD_OK);
  char* final2_raw = nullptr;
  REQUIRE(vrd_synthesis_program(synth2.s, "final", &final2_raw) == VRD_OK);
  CHECK(take(final2_raw) == final_text);

  // Positives/negatives parts parse and stay consistent with "final".
  for (const char* part : {"positives", "negatives"}) {
    char* part_raw = nullptr;
    REQUIRE(vrd_synthesis_program(synth.s, part, &part_raw) == VRD_OK);
    ProgramCloser pp;
    CHECK(vrd_program_parse(take(part_raw).c_str(), &pp.p) == VRD_OK);
  }
}

TEST_CASE("combine merges prediction maps") {
  char* out_raw = nullptr;
  REQUIRE(vrd_combine(R"({"a": [[0, 1]]})", R"({"a": [[2, 3]], "b": [[5, 6]]})",
                      R"({"a": [[2, 3]]})", &out_raw) == VRD_OK);
  const json combined = json::parse(take(out_raw));
  CHECK(combined["a"] == json::parse("[[0,1]]"));
  CHECK(combined["b"] == json::parse("[[5,6]]"));

  // NULL negatives means plain union.
  char* out2_raw = nullptr;
  REQUIRE(vrd_combine(R"({"a": [[0, 1]]})", R"({"a": [[2, 3]]})", nullptr, &out2_raw) == VRD_OK);
  CHECK(json::parse(take(out2_raw))["a"].size() == 2);
}

TEST_CASE("error reporting") {
  SUBCASE("missing directory is a data error with a message") {
    vrd_corpus* c = nullptr;
    CHECK(vrd_corpus_open("/nonexistent/vrdlink-dir", nullptr, &c) == VRD_ERR_DATA);
    CHECK(c == nullptr);
    CHECK(std::string(vrd_last_error()).find("nonexistent") != std::string::npos);
  }
  SUBCASE("unknown option keys are usage errors") {
    TempDir dir;
    char* manifest = nullptr;
    REQUIRE(vrd_corpus_generate(dir.path.c_str(),
                                R"({"families":["flat"],"count_per_family":1,"seed":1})",
                                &manifest) == VRD_OK);
    vrd_string_free(manifest);
    vrd_corpus* c = nullptr;
    CHECK(vrd_corpus_open(dir.path.c_str(), R"({"prune":true,"typo_key":1})", &c) ==
          VRD_ERR_USAGE);
    CHECK(std::string(vrd_last_error()).find("typo_key") != std::string::npos);
    CHECK(vrd_corpus_open(dir.path.c_str(), "not json", &c) == VRD_ERR_USAGE);
  }
  SUBCASE("null arguments are usage errors") {
    CHECK(vrd_corpus_open(nullptr, nullptr, nullptr) == VRD_ERR_USAGE);
    CHECK(vrd_corpus_stats(nullptr, nullptr) == VRD_ERR_USAGE);
    CHECK(vrd_program_parse(nullptr, nullptr) == VRD_ERR_USAGE);
    CHECK(vrd_run(nullptr, nullptr, nullptr) == VRD_ERR_USAGE);
    char* out = nullptr;
    CHECK(vrd_combine(nullptr, "{}", nullptr, &out) == VRD_ERR_USAGE);
  }
  SUBCASE("malformed programs are data errors") {
    vrd_program* p = nullptr;
    CHECK(vrd_program_parse("{\"kind\": \"nope\"}", &p) == VRD_ERR_DATA);
    CHECK(p == nullptr);
    CHECK(vrd_program_open("/nonexistent/prog.json", &p) == VRD_ERR_DATA);
  }
  SUBCASE("bad synthesis part name") {
    TempDir dir;
    char* manifest = nullptr;
    REQUIRE(vrd_corpus_generate(dir.path.c_str(),
                                R"({"families":["flat"],"count_per_family":1,"seed":2})",
                                &manifest) == VRD_OK);
    vrd_string_free(manifest);
    CorpusCloser corpus;
    REQUIRE(vrd_corpus_open(dir.path.c_str(), nullptr, &corpus.c) == VRD_OK);
    SynthesisCloser synth;
    REQUIRE(vrd_synthesize(corpus.c, nullptr, &synth.s) == VRD_OK);
    char* out = nullptr;
    CHECK(vrd_synthesis_program(synth.s, "middles", &out) == VRD_ERR_USAGE);
  }
  SUBCASE("scoring rejects unknown docs and bad formats") {
    TempDir dir;
    char* manifest = nullptr;
    REQUIRE(vrd_corpus_generate(dir.path.c_str(),
                                R"({"families":["flat"],"count_per_family":1,"seed":3})",
                                &manifest) == VRD_OK);
    vrd_string_free(manifest);
    CorpusCloser corpus;
    REQUIRE(vrd_corpus_open(dir.path.c_str(), nullptr, &corpus.c) == VRD_OK);
    char* out = nullptr;
    CHECK(vrd_score(R"({"ghost-doc": [[0, 1]]})", corpus.c, nullptr, &out) == VRD_ERR_DATA);
    CHECK(vrd_score("[]", corpus.c, nullptr, &out) == VRD_ERR_DATA);
    CHECK(vrd_score("{}", corpus.c, R"({"format":"xml"})", &out) == VRD_ERR_USAGE);
  }
}

TEST_CASE("generation options are validated") {
  TempDir dir;
  char* out = nullptr;
  CHECK(vrd_corpus_generate(dir.path.c_str(), R"({"families":["cubist"]})", &out) ==
        VRD_ERR_USAGE);
  CHECK(vrd_corpus_generate(dir.path.c_str(), R"({"count_per_family":0})", &out) ==
        VRD_ERR_USAGE);
  CHECK(vrd_corpus_generate(nullptr, nullptr, &out) == VRD_ERR_USAGE);
}
