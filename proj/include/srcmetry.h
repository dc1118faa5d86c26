/*
 * Copyright (c) 2026 srcmetry contributors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C API of the srcmetry engine: source-code size/cost/quality metrics,
 * dual-engine clone detection, triage, and growth-trend statistics.
 *
 * Conventions:
 *   - Every function returning sm_status sets the thread-local message
 *     retrievable with sm_last_error() on failure.
 *   - Strings returned through char** are heap-allocated JSON (or JSON
 *     lines) and must be released with sm_string_free().
 *   - Handles are opaque; destroy them with their matching _free call.
 */

#ifndef SRCMETRY_H
#define SRCMETRY_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sm_status {
    SM_OK = 0,
    SM_ERR_IO = 1,
    SM_ERR_PARSE = 2,
    SM_ERR_INVALID_ARGUMENT = 3,
    SM_ERR_DOMAIN = 4,
    SM_ERR_INTERNAL = 5,
} sm_status;

typedef struct sm_corpus sm_corpus;

const char* sm_version(void);

/* Message describing the most recent failure on this thread. */
const char* sm_last_error(void);

void sm_string_free(char* s);

/* ---- corpus ---------------------------------------------------------- */

/* Load a manifest (JSON array of samples) and scan every sample tree. */
sm_status sm_corpus_load(const char* manifest_path, int jobs, sm_corpus** out);
void sm_corpus_free(sm_corpus* corpus);

int sm_corpus_sample_count(const sm_corpus* corpus);
int sm_corpus_file_count(const sm_corpus* corpus);

/* Per-sample file/language/skip summary as JSON. */
sm_status sm_corpus_summary_json(const sm_corpus* corpus, char** json_out);

/* ---- metrics ---------------------------------------------------------- */

/*
 * Metrics stage (tallies, function points, COCOMO, quality) as JSON.
 * options_json (may be NULL): {"cocomo_class": "organic|semidetached|embedded",
 *                              "jobs": N}
 */
sm_status sm_corpus_metrics_json(const sm_corpus* corpus, const char* options_json,
                                 char** json_out);

/* Basic COCOMO point estimate. kloc must be > 0. */
sm_status sm_cocomo_estimate(double kloc, const char* project_class, double* effort_out,
                             double* duration_out, double* people_out);

/* ---- clone detection --------------------------------------------------- */

/*
 * options_json (may be NULL):
 *   {"engine": "diff|ast", "raw": false, "jobs": N,
 *    "thresholds": {"Assembly": 10, "C": 5, ...},
 *    "min_tokens": 100, "stride": 2, "similarity": 1.0}
 * engine "diff" returns JSON-lines CloneMatch records; engine "ast" returns a
 * JSON document of vector clusters.
 */
sm_status sm_corpus_clones(const sm_corpus* corpus, const char* options_json, char** out);

/*
 * Group clone matches (JSON lines, as produced by the diff engine) into
 * triage clusters. options_json (may be NULL):
 *   {"threshold": 90, "identifier_rule": false, "labels": {"cluster-0000": "..."}}
 */
sm_status sm_triage(const char* clones_jsonl, const char* options_json, char** json_out);

/* ---- statistics -------------------------------------------------------- */

/*
 * Growth fits over the corpus metrics. options_json (may be NULL):
 *   {"cocomo_class": "...", "aggregate_years": false, "jobs": N}
 */
sm_status sm_corpus_trends_json(const sm_corpus* corpus, const char* options_json,
                                char** json_out);

/* Exponential fit of a {"points": [{"year": Y, "value": V}, ...]} document. */
sm_status sm_exp_fit_json(const char* series_json, char** json_out);
sm_status sm_linear_fit_json(const char* series_json, char** json_out);

sm_status sm_ks_two_sample(const double* a, size_t na, const double* b, size_t nb,
                           double* d_out, double* p_out);

/* ---- pipeline ---------------------------------------------------------- */

/*
 * Run the configured stages and write all artifacts. config_json follows the
 * run-config schema (see README). Returns SM_OK only if every stage passed;
 * a summary document is written to summary_out either way when non-NULL.
 */
sm_status sm_run(const char* config_json, const char* base_dir, char** summary_out);

/* Side-by-side comparison of two report.json documents. */
sm_status sm_compare(const char* report_a_json, const char* report_b_json,
                     const char* options_json, char** json_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SRCMETRY_H */
