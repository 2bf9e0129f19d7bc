/* Copyright 2026 The reasonsat Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the reasonsat library. Every function returns an
 * rsat_status; on failure rsat_last_error() describes the problem for the
 * calling thread. Strings handed out through char** parameters are owned by
 * the caller and released with rsat_string_free(). Structured results are
 * JSON documents.
 */
#ifndef REASONSAT_H_
#define REASONSAT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(REASONSAT_BUILDING)
#define RSAT_API __declspec(dllexport)
#else
#define RSAT_API __declspec(dllimport)
#endif
#else
#define RSAT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rsat_status {
  RSAT_OK = 0,
  RSAT_E_INVALID_ARGUMENT = 1, /* null pointer, contract violation */
  RSAT_E_PARSE = 2,            /* DIMACS or other input text malformed */
  RSAT_E_CONFIG = 3,           /* configuration rejected */
  RSAT_E_GENERATION = 4,       /* rejection sampling exhausted */
  RSAT_E_TRANSPORT = 5,        /* LLM endpoint unreachable after retries */
  RSAT_E_IO = 6,               /* file could not be read or written */
  RSAT_E_LIMIT = 7,            /* oracle variable limit exceeded */
  RSAT_E_NUMERIC = 8,          /* rank-deficient design or similar */
  RSAT_E_REPLAY_GAP = 9,       /* replay file lacks some runs */
  RSAT_E_INTERNAL = 10
} rsat_status;

typedef struct rsat_formula rsat_formula;

RSAT_API const char* rsat_version(void);
RSAT_API const char* rsat_status_name(rsat_status status);
/* Message for the last failed call on this thread; "" if none. */
RSAT_API const char* rsat_last_error(void);
RSAT_API void rsat_string_free(char* s);

/* --- formulas ---------------------------------------------------------- */

RSAT_API rsat_status rsat_formula_parse_dimacs(const char* text, rsat_formula** out);
RSAT_API void rsat_formula_free(rsat_formula* f);
RSAT_API uint32_t rsat_formula_num_vars(const rsat_formula* f);
RSAT_API size_t rsat_formula_num_clauses(const rsat_formula* f);
RSAT_API rsat_status rsat_formula_write_dimacs(const rsat_formula* f, char** out);
/* "(x1) AND (x2 OR NOT x1)" */
RSAT_API rsat_status rsat_formula_render(const rsat_formula* f, char** out);

/* ["TT", ...] in lexicographic order. */
RSAT_API rsat_status rsat_solutions(const rsat_formula* f, char** out_json);
/* Structure profile plus "stratum" and per-clause "critical" verdicts. */
RSAT_API rsat_status rsat_profile(const rsat_formula* f, char** out_json);
/* heuristic_json may be NULL (random branching, unit propagation on). */
RSAT_API rsat_status rsat_solve(const rsat_formula* f, const char* heuristic_json, char** out_json);

/* --- subject ----------------------------------------------------------- */

RSAT_API rsat_status rsat_build_prompt(const rsat_formula* f, char** out);
/* {"ok":true,"response":{...}} or {"ok":false,"failure":{"kind":..,"message":..}} */
RSAT_API rsat_status rsat_parse_response(const char* text, uint32_t num_vars, char** out_json);

/* --- analysis ---------------------------------------------------------- */

/* lexicon_json may be NULL for the standard five categories. */
RSAT_API rsat_status rsat_tag_text(const char* text, const char* lexicon_json, char** out_json);
/* CSV with a header row; all columns other than `outcome` become covariates
 * after an implicit intercept. */
RSAT_API rsat_status rsat_logistic_fit_csv(const char* csv_text, const char* outcome, char** out_json);
/* Reads a records file and writes report.txt, CSVs and results.json to
 * out_dir. options_json may be NULL. out_text receives report.txt. */
RSAT_API rsat_status rsat_report(const char* records_path, const char* options_json,
                                 const char* out_dir, char** out_text);

/* --- experiments ------------------------------------------------------- */

/* Merges overrides_json onto config_json (either may be NULL) and returns
 * the validated effective configuration. */
RSAT_API rsat_status rsat_config_resolve(const char* config_json, const char* overrides_json,
                                         char** out_json);
/* Generates the dataset described by config_json into its output_dir. */
RSAT_API rsat_status rsat_generate(const char* config_json, char** out_summary_json);

typedef void (*rsat_progress_fn)(size_t done, size_t total, size_t parse_failures,
                                 size_t transport_failures, void* user);

/* Executes pending runs. Returns RSAT_E_TRANSPORT if any run ended in a
 * transport failure and RSAT_E_REPLAY_GAP if the replay file lacks runs; the
 * summary is produced in every case where the run loop completed. */
RSAT_API rsat_status rsat_run(const char* config_json, rsat_progress_fn progress, void* user,
                              char** out_summary_json);

#ifdef __cplusplus
}
#endif

#endif /* REASONSAT_H_ */
