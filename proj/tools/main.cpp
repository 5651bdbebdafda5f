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

// vrdlink command-line front end. Talks to the engine exclusively through
// the C API in vrdlink.h; the only work done here is argument marshalling
// and file I/O.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vrdlink.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void die(vrd_status status) {
  std::fprintf(stderr, "error: %s\n", vrd_last_error());
  std::exit(static_cast<int>(status));
}

void check(vrd_status status) {
  if (status != VRD_OK) die(status);
}

// Takes ownership of a C-API string and converts it to std::string.
std::string take(char* s) {
  std::string out = s != nullptr ? s : "";
  vrd_string_free(s);
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::fprintf(stderr, "error: cannot open '%s'\n", path.string().c_str());
    std::exit(2);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    std::fprintf(stderr, "error: cannot write '%s'\n", path.string().c_str());
    std::exit(2);
  }
  out << content;
  if (!out.good()) {
    std::fprintf(stderr, "error: failed writing '%s'\n", path.string().c_str());
    std::exit(2);
  }
}

struct GraphFlags {
  double overlap_threshold = 0.5;
  bool no_prune = false;
  int page_width = 0;
  int page_height = 0;
  bool no_tables = false;
};

void add_graph_flags(CLI::App* cmd, GraphFlags& gf) {
  cmd->add_option("--overlap-threshold", gf.overlap_threshold,
                  "Projection overlap threshold as a fraction of the smaller interval")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_flag("--no-prune", gf.no_prune, "Keep transitive spatial relations");
  cmd->add_option("--page-width", gf.page_width,
                  "Fallback page width when a document has no .size.json sidecar");
  cmd->add_option("--page-height", gf.page_height, "Fallback page height");
  cmd->add_flag("--no-tables", gf.no_tables, "Ignore .tables.json annotation sidecars");
}

std::string corpus_options(const GraphFlags& gf) {
  json j{{"overlap_threshold", gf.overlap_threshold},
         {"prune", !gf.no_prune},
         {"use_tables", !gf.no_tables}};
  if (gf.page_width > 0) j["page_width"] = gf.page_width;
  if (gf.page_height > 0) j["page_height"] = gf.page_height;
  return j.dump();
}

struct CorpusHandle {
  vrd_corpus* ptr = nullptr;
  ~CorpusHandle() { vrd_corpus_close(ptr); }
};

struct ProgramHandle {
  vrd_program* ptr = nullptr;
  ~ProgramHandle() { vrd_program_close(ptr); }
};

struct SynthesisHandle {
  vrd_synthesis* ptr = nullptr;
  ~SynthesisHandle() { vrd_synthesis_close(ptr); }
};

int cmd_synthesize(const std::string& train_dir, const fs::path& out, const GraphFlags& gf,
                   int max_iterations, int max_path_len, long long min_support,
                   double timeout_seconds, bool quiet) {
  CorpusHandle corpus;
  check(vrd_corpus_open(train_dir.c_str(), corpus_options(gf).c_str(), &corpus.ptr));

  const json options{{"max_iterations", max_iterations},
                     {"max_path_len", max_path_len},
                     {"min_support", min_support},
                     {"timeout_seconds", timeout_seconds}};
  SynthesisHandle synthesis;
  check(vrd_synthesize(corpus.ptr, options.dump().c_str(), &synthesis.ptr));

  char* manifest_text = nullptr;
  check(vrd_synthesis_manifest(synthesis.ptr, &manifest_text));
  const std::string manifest_str = take(manifest_text);

  const fs::path dir = out.has_parent_path() ? out.parent_path() : fs::path(".");
  for (const char* part : {"final", "positives", "negatives"}) {
    char* text = nullptr;
    check(vrd_synthesis_program(synthesis.ptr, part, &text));
    fs::path target = out;
    if (std::string(part) == "positives") target = dir / "pp.json";
    if (std::string(part) == "negatives") target = dir / "np.json";
    write_file(target, take(text));
  }
  write_file(dir / "run_manifest.json", manifest_str);

  if (!quiet) {
    const json manifest = json::parse(manifest_str);
    for (const auto& it : manifest.at("iterations")) {
      std::printf("iteration %d: entries %zu -> %zu, pp +%d, np +%d, pcover %zu, ncover %zu\n",
                  it.at("iteration").get<int>(), it.at("entries_in").get<size_t>(),
                  it.at("entries_out").get<size_t>(), it.at("pp_added").get<int>(),
                  it.at("np_added").get<int>(), it.at("pcover").get<size_t>(),
                  it.at("ncover").get<size_t>());
    }
    const auto& totals = manifest.at("totals");
    std::printf("covered %lld of %lld training links; %zu positive / %zu negative programs\n",
                totals.at("covered_links").get<long long>(),
                totals.at("total_links").get<long long>(),
                totals.at("positive_programs").get<size_t>(),
                totals.at("negative_programs").get<size_t>());
    if (totals.at("positive_programs").get<size_t>() == 0) {
      std::printf("no links learnable: final program is Empty\n");
    }
    std::printf("wrote %s (+ pp.json, np.json, run_manifest.json)\n", out.string().c_str());
  }
  return 0;
}

int cmd_run(const std::string& program_path, const std::string& docs_dir, const std::string& out,
            const GraphFlags& gf) {
  ProgramHandle program;
  check(vrd_program_open(program_path.c_str(), &program.ptr));
  CorpusHandle corpus;
  check(vrd_corpus_open(docs_dir.c_str(), corpus_options(gf).c_str(), &corpus.ptr));
  char* predictions = nullptr;
  check(vrd_run(program.ptr, corpus.ptr, &predictions));
  const std::string text = take(predictions);
  if (out.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    write_file(out, text);
  }
  return 0;
}

int cmd_eval(const std::string& pred_path, const std::string& gold_dir, const std::string& format,
             const std::string& combine_other, const std::string& combine_negatives,
             const GraphFlags& gf) {
  std::string predictions = read_file(pred_path);
  if (!combine_other.empty()) {
    const std::string other = read_file(combine_other);
    std::string negatives;
    if (!combine_negatives.empty()) negatives = read_file(combine_negatives);
    char* combined = nullptr;
    check(vrd_combine(predictions.c_str(), other.c_str(),
                      negatives.empty() ? nullptr : negatives.c_str(), &combined));
    predictions = take(combined);
  } else if (!combine_negatives.empty()) {
    // Subtracting negatives without a second prediction set: combine with an
    // empty "other" map.
    const std::string negatives = read_file(combine_negatives);
    char* combined = nullptr;
    check(vrd_combine(predictions.c_str(), "{}", negatives.c_str(), &combined));
    predictions = take(combined);
  }

  CorpusHandle gold;
  check(vrd_corpus_open(gold_dir.c_str(), corpus_options(gf).c_str(), &gold.ptr));
  const json options{{"format", format}};
  char* report = nullptr;
  check(vrd_score(predictions.c_str(), gold.ptr, options.dump().c_str(), &report));
  std::fputs(take(report).c_str(), stdout);
  return 0;
}

int cmd_inspect(const std::string& program_path) {
  ProgramHandle program;
  check(vrd_program_open(program_path.c_str(), &program.ptr));
  char* pretty = nullptr;
  check(vrd_program_pretty(program.ptr, &pretty));
  std::fputs(take(pretty).c_str(), stdout);
  return 0;
}

int cmd_gen(const std::string& out_dir, int count, const std::vector<std::string>& families,
            uint64_t seed, bool quiet) {
  json options{{"count_per_family", count}, {"seed", seed}};
  bool all = families.empty();
  for (const auto& f : families) {
    if (f == "all") all = true;
  }
  if (!all) options["families"] = families;
  char* manifest = nullptr;
  check(vrd_corpus_generate(out_dir.c_str(), options.dump().c_str(), &manifest));
  const std::string text = take(manifest);
  if (!quiet) {
    const json j = json::parse(text);
    std::printf("wrote %zu documents to %s\n", j.at("count").get<size_t>(),
                out_dir.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthesizes and runs link-extraction programs over visually rich documents"};
  app.require_subcommand(1);

  // synthesize
  auto* synth = app.add_subcommand("synthesize", "Learn a program from an annotated corpus");
  std::string train_dir, synth_out = "program.json";
  GraphFlags synth_gf;
  int max_iterations = 3, max_path_len = 2;
  long long min_support = 0;
  double timeout_seconds = 7200.0;
  bool quiet = false;
  synth->add_option("--train-dir", train_dir, "Directory of FUNSD-format training documents")
      ->required();
  synth->add_option("--out", synth_out, "Output program path")->capture_default_str();
  synth->add_option("--max-iterations", max_iterations, "Refinement iterations")
      ->capture_default_str();
  synth->add_option("--max-path-len", max_path_len, "Maximum mined path length")
      ->capture_default_str();
  synth->add_option("--min-support", min_support, "Minimum per-signature link support")
      ->capture_default_str();
  synth->add_option("--timeout-seconds", timeout_seconds, "Wall-clock budget")
      ->capture_default_str();
  synth->add_flag("--quiet", quiet, "Suppress progress output");
  add_graph_flags(synth, synth_gf);

  // run
  auto* run = app.add_subcommand("run", "Evaluate a program over documents");
  std::string run_program, run_docs, run_out;
  GraphFlags run_gf;
  run->add_option("--program", run_program, "Program file")->required();
  run->add_option("--docs", run_docs, "Directory of documents")->required();
  run->add_option("--out", run_out, "Predictions output path (stdout when omitted)");
  add_graph_flags(run, run_gf);

  // eval
  auto* eval = app.add_subcommand("eval", "Score predictions against gold links");
  std::string eval_pred, eval_gold, eval_format = "json";
  std::string eval_other, eval_negatives;
  GraphFlags eval_gf;
  eval->add_option("--pred", eval_pred, "Predictions file")->required();
  eval->add_option("--gold", eval_gold, "Directory with gold annotations")->required();
  eval->add_option("--format", eval_format, "Report format")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();
  eval->add_option("--combine-other", eval_other,
                   "Second predictions file united with --pred before scoring");
  eval->add_option("--combine-negatives", eval_negatives,
                   "Predictions file subtracted before scoring");
  add_graph_flags(eval, eval_gf);

  // inspect
  auto* inspect = app.add_subcommand("inspect", "Pretty-print a program");
  std::string inspect_program;
  inspect->add_option("--program", inspect_program, "Program file")->required();

  // gen-synthetic
  auto* gen = app.add_subcommand("gen-synthetic", "Generate a synthetic training corpus");
  std::string gen_out;
  int gen_count = 10;
  std::vector<std::string> gen_families;
  uint64_t gen_seed = 7;
  bool gen_quiet = false;
  gen->add_option("--out", gen_out, "Output directory")->required();
  gen->add_option("--count", gen_count, "Documents per family")->capture_default_str();
  gen->add_option("--family", gen_families,
                  "Layout family: flat, grouped, longvalue, table, or all (repeatable)")
      ->check(CLI::IsMember({"flat", "grouped", "longvalue", "table", "all"}));
  gen->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
  gen->add_flag("--quiet", gen_quiet, "Suppress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    (void)app.exit(e);
    return 1;
  }

  if (synth->parsed()) {
    return cmd_synthesize(train_dir, synth_out, synth_gf, max_iterations, max_path_len,
                          min_support, timeout_seconds, quiet);
  }
  if (run->parsed()) return cmd_run(run_program, run_docs, run_out, run_gf);
  if (eval->parsed()) {
    return cmd_eval(eval_pred, eval_gold, eval_format, eval_other, eval_negatives, eval_gf);
  }
  if (inspect->parsed()) return cmd_inspect(inspect_program);
  if (gen->parsed()) return cmd_gen(gen_out, gen_count, gen_families, gen_seed, gen_quiet);
  return 1;
}
