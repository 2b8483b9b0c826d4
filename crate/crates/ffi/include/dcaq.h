#ifndef DCAQ_H
#define DCAQ_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a call.
 */
typedef enum DcaqStatus {
  DCAQ_STATUS_OK = 0,
  DCAQ_STATUS_NULL_POINTER = 1,
  DCAQ_STATUS_INVALID_UTF8 = 2,
  DCAQ_STATUS_IO = 3,
  DCAQ_STATUS_PARSE = 4,
  DCAQ_STATUS_INVALID_INPUT = 5,
  DCAQ_STATUS_OVERFLOW = 6,
  DCAQ_STATUS_OUT_OF_RANGE = 7,
  DCAQ_STATUS_SAMPLER_EXHAUSTED = 8,
  DCAQ_STATUS_INTERNAL = 98,
  DCAQ_STATUS_PANIC = 99,
} DcaqStatus;

typedef enum DcaqOrganizedness {
  DCAQ_ORGANIZEDNESS_POOR = 0,
  DCAQ_ORGANIZEDNESS_AVERAGE = 1,
  DCAQ_ORGANIZEDNESS_GOOD = 2,
} DcaqOrganizedness;

typedef enum DcaqResponsiveness {
  DCAQ_RESPONSIVENESS_LOW = 0,
  DCAQ_RESPONSIVENESS_HIGH = 1,
} DcaqResponsiveness;

typedef enum DcaqOrganization {
  DCAQ_ORGANIZATION_SORTED_SEQUENTIAL_LIST = 0,
  DCAQ_ORGANIZATION_BALANCED_BINARY_TREE = 1,
  DCAQ_ORGANIZATION_UNSORTED_SEQUENTIAL_LIST = 2,
} DcaqOrganization;

/**
 * Result of evaluating a scenario.
 */
typedef struct DcaqEvaluation DcaqEvaluation;

/**
 * Parsed, validated scenario.
 */
typedef struct DcaqScenario DcaqScenario;

typedef struct DcaqClassification {
  enum DcaqOrganizedness organizedness;
  enum DcaqResponsiveness responsiveness;
} DcaqClassification;

/**
 * Monte Carlo summary of the quotient.
 */
typedef struct DcaqMcSummary {
  uint64_t trials;
  uint64_t seed;
  double mean;
  double stddev;
  double min;
  double p5;
  double p50;
  double p95;
  double max;
  /**
   * Set when every trial used the same network rate.
   */
  bool degenerate;
} DcaqMcSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static string that must not be freed.
 */
const char *dcaq_version(void);

/**
 * Message for the last failed call on this thread, or NULL. The caller owns
 * the returned string and frees it with [`dcaq_string_free`].
 */
char *dcaq_last_error_message(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library that has not been freed.
 */
void dcaq_string_free(char *s);

/**
 * Loads a scenario from a file path, or from a built-in fixture name
 * (`illustration1`, `illustration2`) when no such file exists.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum DcaqStatus dcaq_scenario_from_file(const char *path, struct DcaqScenario **out);

/**
 * Parses a scenario document held in memory.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum DcaqStatus dcaq_scenario_from_str(const char *text, struct DcaqScenario **out);

/**
 * # Safety
 * `scenario` must be NULL or a handle from this library that has not been freed.
 */
void dcaq_scenario_free(struct DcaqScenario *scenario);

/**
 * Scenario label; free with [`dcaq_string_free`].
 *
 * # Safety
 * `scenario` must be NULL or a live handle.
 */
char *dcaq_scenario_label(const struct DcaqScenario *scenario);

/**
 * Evaluates a scenario with the default thresholds. When `use_override` is
 * false any explicit search-time override is ignored.
 *
 * # Safety
 * `scenario` must be a live handle and `out` a valid pointer.
 */
enum DcaqStatus dcaq_evaluate(const struct DcaqScenario *scenario,
                              bool use_override,
                              struct DcaqEvaluation **out);

/**
 * # Safety
 * `evaluation` must be NULL or a handle from this library that has not been freed.
 */
void dcaq_evaluation_free(struct DcaqEvaluation *evaluation);

/**
 * The quotient, or NaN for a NULL handle.
 *
 * # Safety
 * `evaluation` must be NULL or a live handle.
 */
double dcaq_evaluation_value(const struct DcaqEvaluation *evaluation);

/**
 * Total access time in ns, or NaN for a NULL handle.
 *
 * # Safety
 * `evaluation` must be NULL or a live handle.
 */
double dcaq_evaluation_access_time_ns(const struct DcaqEvaluation *evaluation);

/**
 * Search time in ns actually used, or NaN for a NULL handle.
 *
 * # Safety
 * `evaluation` must be NULL or a live handle.
 */
double dcaq_evaluation_ts_ns(const struct DcaqEvaluation *evaluation);

/**
 * 3 for local scenarios, 6 for remote, 0 for a NULL handle.
 *
 * # Safety
 * `evaluation` must be NULL or a live handle.
 */
size_t dcaq_evaluation_stage_count(const struct DcaqEvaluation *evaluation);

/**
 * Duration in ns of stage `index` (0-based).
 *
 * # Safety
 * `evaluation` must be a live handle and `out` a valid pointer.
 */
enum DcaqStatus dcaq_evaluation_stage_ns(const struct DcaqEvaluation *evaluation,
                                         size_t index,
                                         double *out);

/**
 * # Safety
 * `evaluation` must be a live handle and `out` a valid pointer.
 */
enum DcaqStatus dcaq_evaluation_classification(const struct DcaqEvaluation *evaluation,
                                               struct DcaqClassification *out);

/**
 * Rendered report, machine-readable when `machine` is true. Free with
 * [`dcaq_string_free`]; NULL for a NULL handle.
 *
 * # Safety
 * `evaluation` must be NULL or a live handle.
 */
char *dcaq_evaluation_report(const struct DcaqEvaluation *evaluation, bool machine);

/**
 * Quotient from its four terms: availability, search time (ns), access time
 * (s) and sublibrary count.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum DcaqStatus dcaq_compute(bool available,
                             double ts_ns,
                             double access_time_s,
                             uint64_t sublibrary_count,
                             double *out);

/**
 * `bits / rate` in ns, with `rate` in bits/ns.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum DcaqStatus dcaq_transfer_time(uint64_t bits, double rate, double *out);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum DcaqStatus dcaq_cache_effective_time(double hit_ratio,
                                          double cache_time,
                                          double memory_time,
                                          double *out);

/**
 * Worst-case search steps for `component_count` components.
 * `organization` is a [`DcaqOrganization`] value.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum DcaqStatus dcaq_search_iterations(uint32_t organization,
                                       uint64_t component_count,
                                       uint64_t *out);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum DcaqStatus dcaq_sublibrary_count(uint64_t machine_types, uint64_t os_types, uint64_t *out);

/**
 * Monte Carlo over the scenario's network-rate distribution.
 *
 * # Safety
 * `scenario` must be a live handle and `out` a valid pointer.
 */
enum DcaqStatus dcaq_monte_carlo(const struct DcaqScenario *scenario,
                                 bool use_override,
                                 uint64_t trials,
                                 uint64_t seed,
                                 struct DcaqMcSummary *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DCAQ_H */
