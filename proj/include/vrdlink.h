/* Copyright 2026 The vrdlink Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C API of the vrdlink engine. All functions return a status code; every
 * `char**` output is a NUL-terminated string owned by the caller and must be
 * released with vrd_string_free. Error details for the most recent failing
 * call on the current thread are available via vrd_last_error. JSON option
 * strings may be NULL or empty for defaults; unknown option keys are
 * rejected.
 */

#ifndef VRDLINK_H
#define VRDLINK_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vrd_status {
  VRD_OK = 0,
  VRD_ERR_USAGE = 1,   /* invalid options or API misuse */
  VRD_ERR_DATA = 2,    /* malformed or inconsistent input data */
  VRD_ERR_INTERNAL = 3 /* unexpected failure */
} vrd_status;

typedef struct vrd_corpus vrd_corpus;       /* loaded documents + graphs + gold links */
typedef struct vrd_program vrd_program;     /* immutable DSL program */
typedef struct vrd_synthesis vrd_synthesis; /* result of one synthesis run */

const char* vrd_last_error(void);
void vrd_string_free(char* s);

/* ---- Corpus ----------------------------------------------------------- */

/* Loads every FUNSD-format *.json under dir (with .size.json / .tables.json
 * sidecars). Options:
 *   {"overlap_threshold":0.5, "prune":true, "page_width":W, "page_height":H,
 *    "use_tables":true}
 */
vrd_status vrd_corpus_open(const char* dir, const char* options_json, vrd_corpus** out);
void vrd_corpus_close(vrd_corpus* corpus);

/* {"docs":N, "entities":E, "relations":R, "links":L, "fingerprint":"..."} */
vrd_status vrd_corpus_stats(const vrd_corpus* corpus, char** json_out);

/* Writes a deterministic synthetic corpus into dir. Options:
 *   {"families":["flat","grouped","longvalue","table"],
 *    "count_per_family":10, "seed":7}
 * Returns a manifest listing the documents written.
 */
vrd_status vrd_corpus_generate(const char* dir, const char* options_json,
                               char** manifest_json_out);

/* ---- Synthesis -------------------------------------------------------- */

/* Options:
 *   {"max_iterations":3, "max_path_len":2, "min_support":0,
 *    "timeout_seconds":7200}
 */
vrd_status vrd_synthesize(const vrd_corpus* corpus, const char* options_json,
                          vrd_synthesis** out);

/* part: "final" (Exclude(Union(PP), Union(NP)) or Empty), "positives"
 * (Union(PP) or Empty), "negatives" (Union(NP) or Empty). Output is the
 * serialized program. */
vrd_status vrd_synthesis_program(const vrd_synthesis* synthesis, const char* part,
                                 char** json_out);

/* Mining, per-iteration, and coverage statistics of the run. */
vrd_status vrd_synthesis_manifest(const vrd_synthesis* synthesis, char** json_out);
void vrd_synthesis_close(vrd_synthesis* synthesis);

/* ---- Programs ----------------------------------------------------------- */

vrd_status vrd_program_open(const char* path, vrd_program** out);
vrd_status vrd_program_parse(const char* text, vrd_program** out);
vrd_status vrd_program_save(const vrd_program* program, const char* path);
vrd_status vrd_program_json(const vrd_program* program, char** out);
vrd_status vrd_program_pretty(const vrd_program* program, char** out);
void vrd_program_close(vrd_program* program);

/* ---- Running and scoring ------------------------------------------------ */

/* Evaluates the program on every document; output maps doc id to predicted
 * pairs: {"doc": [[src,dst], ...], ...}. Deterministic bytes. */
vrd_status vrd_run(const vrd_program* program, const vrd_corpus* corpus,
                   char** predictions_json_out);

/* Scores predictions against the corpus gold links.
 * Options: {"format":"json"} (default) or {"format":"table"}. */
vrd_status vrd_score(const char* predictions_json, const vrd_corpus* gold,
                     const char* options_json, char** report_out);

/* Per-document (base ∪ other) ∖ negatives; negatives_json may be NULL. */
vrd_status vrd_combine(const char* base_json, const char* other_json,
                       const char* negatives_json, char** combined_json_out);

#ifdef __cplusplus
}
#endif

#endif /* VRDLINK_H */
