/* Copyright 2026 The Intersective Workbench Authors
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

/* C interface to the workbench. Objects are opaque handles released with
 * their *_free function. Every call returns an iwb_status; on failure the
 * message is available from iwb_last_error() on the same thread. Strings
 * returned through char** are heap copies released with iwb_string_free.
 * Big integers travel as decimal strings, polynomials as JSON arrays of
 * coefficients in ascending degree. */

#ifndef IWB_IWB_H
#define IWB_IWB_H

#include <stddef.h>
#include <stdint.h>

#if defined(IWB_BUILDING_LIBRARY)
#define IWB_API __attribute__((visibility("default")))
#else
#define IWB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum iwb_status {
  IWB_OK = 0,
  IWB_E_INVALID_ARGUMENT = 1,
  IWB_E_DOMAIN = 2,
  IWB_E_PRECISION_EXHAUSTED = 3,
  IWB_E_DEPTH_EXHAUSTED = 4,
  IWB_E_NON_INTEGRAL = 5,
  IWB_E_MISSING_ROOT_DATA = 6,
  IWB_E_CAP_EXCEEDED = 7,
  IWB_E_HYPOTHESIS_VIOLATION = 8,
  IWB_E_GRID_TOO_SMALL = 9,
  IWB_E_INFEASIBLE = 10,
  IWB_E_CONFIG = 11,
  IWB_E_IO = 12,
  IWB_E_INTERNAL = 13
} iwb_status;

typedef struct iwb_poly iwb_poly;       /* integer polynomial */
typedef struct iwb_context iwb_context; /* auxiliary polynomial h_l with its root data */
typedef struct iwb_sieve iwb_sieve;     /* sieve table W(U) of an auxiliary polynomial */
typedef struct iwb_set iwb_set;         /* subset of [1, X] */

IWB_API const char* iwb_version(void);
IWB_API const char* iwb_status_name(iwb_status status);
/* Message of the last failed call on this thread; "" when none. */
IWB_API const char* iwb_last_error(void);
IWB_API void iwb_string_free(char* s);
IWB_API void iwb_u64_free(uint64_t* values);

/* Polynomials */
IWB_API iwb_status iwb_poly_from_coeffs(const int64_t* coeffs, size_t count, iwb_poly** out);
IWB_API iwb_status iwb_poly_from_json(const char* json, iwb_poly** out);
IWB_API void iwb_poly_free(iwb_poly* p);
IWB_API int iwb_poly_degree(const iwb_poly* p);
IWB_API iwb_status iwb_poly_eval(const iwb_poly* p, const char* n, char** out);
IWB_API iwb_status iwb_poly_to_string(const iwb_poly* p, char** out);
IWB_API iwb_status iwb_poly_to_json(const iwb_poly* p, char** out);
/* Intersectivity verdict as JSON. */
IWB_API iwb_status iwb_poly_verdict(const iwb_poly* p, uint64_t prime_bound, int depth_bound, char** out_json);

/* Auxiliary polynomials, default root choices. */
IWB_API iwb_status iwb_context_new(const iwb_poly* h, const char* ell, iwb_context** out);
IWB_API void iwb_context_free(iwb_context* c);
IWB_API iwb_status iwb_context_aux(const iwb_context* c, iwb_poly** out);
IWB_API iwb_status iwb_context_to_json(const iwb_context* c, char** out_json);

/* Sieve tables */
IWB_API iwb_status iwb_sieve_new(const iwb_poly* aux, double U, iwb_sieve** out);
IWB_API void iwb_sieve_free(iwb_sieve* s);
IWB_API iwb_status iwb_sieve_in_W(const iwb_sieve* s, uint64_t n, int* out);
/* J factor as a reduced fraction "p/q" (or "p"). */
IWB_API iwb_status iwb_sieve_J(const iwb_sieve* s, char** out);
IWB_API iwb_status iwb_sieve_period(const iwb_sieve* s, char** out);

/* Sets and forbidden differences */
IWB_API iwb_status iwb_set_new(uint64_t X, iwb_set** out);
IWB_API void iwb_set_free(iwb_set* s);
IWB_API iwb_status iwb_set_insert(iwb_set* s, uint64_t n);
IWB_API uint64_t iwb_set_X(const iwb_set* s);
IWB_API uint64_t iwb_set_size(const iwb_set* s);
/* Writes up to cap members in increasing order; *count gets the set size. */
IWB_API iwb_status iwb_set_members(const iwb_set* s, uint64_t* buf, size_t cap, size_t* count);
/* Sorted values h(n) in [1, X] for n >= 1; release with iwb_u64_free. */
IWB_API iwb_status iwb_forbidden_values(const iwb_poly* aux, uint64_t X, uint64_t** out, size_t* count);
/* *avoiding = 1 when no difference of two members lies in F. */
IWB_API iwb_status iwb_set_verify(const iwb_set* s, const uint64_t* F, size_t nF, int* avoiding);
IWB_API iwb_status iwb_greedy_avoiding(const uint64_t* F, size_t nF, uint64_t X, iwb_set** out);
/* D(F, X) with a witness. time_budget_s <= 0 means no limit. */
IWB_API iwb_status iwb_exact_max_avoiding(const uint64_t* F, size_t nF, uint64_t X, double time_budget_s,
                                          uint64_t* size, iwb_set** witness);

/* Harness */
/* JSON array of operation names. */
IWB_API iwb_status iwb_task_ops(char** out_json);
/* Runs one operation for the polynomial (JSON coefficients). preset and
 * constants_json may be NULL. The output is
 * {"params": ..., "result": ..., "side_files": {...}}. */
IWB_API iwb_status iwb_task_run(const char* poly_json, uint64_t seed, const char* preset, const char* constants_json,
                                const char* op, const char* params_json, char** out_json);
/* Parses a config document, applies the optional overrides and runs it.
 * out_dir NULL keeps the config's directory. *ok is 0 when a required task
 * failed. The report JSON lists the directory and one entry per task. */
IWB_API iwb_status iwb_experiment_run(const char* config_json, const char* out_dir, const uint64_t* seed,
                                      const char* preset, int* ok, char** out_report);
IWB_API iwb_status iwb_report_emit(const char* dir, char** out_summary);

#ifdef __cplusplus
}
#endif

#endif /* IWB_IWB_H */
