#ifndef BELIEFMERGE_H
#define BELIEFMERGE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. Values 1 to 3 match the command-line exit codes.
 */
typedef enum {
  BM_STATUS_OK = 0,
  /**
   * Null pointer or non-UTF-8 string argument.
   */
  BM_STATUS_USAGE = 1,
  BM_STATUS_INVALID_INPUT = 2,
  BM_STATUS_RESOURCE_LIMIT = 3,
  /**
   * A panic was caught at the boundary.
   */
  BM_STATUS_INTERNAL = 4,
} BmStatus;

/**
 * A parsed and validated instance.
 */
typedef struct BmInstance BmInstance;

/**
 * Models selected by a merge.
 */
typedef struct BmResult BmResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *bm_version(void);

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next call into the library from the same thread.
 */
const char *bm_last_error_message(void);

/**
 * Parses an instance from JSON text.
 *
 * # Safety
 * `json` must be null or a NUL-terminated string; `out` must be null or
 * writable.
 */
BmStatus bm_instance_from_json(const char *json, BmInstance **out);

/**
 * # Safety
 * `inst` must be null or a handle from [`bm_instance_from_json`] not yet
 * freed.
 */
void bm_instance_free(BmInstance *inst);

/**
 * Number of variables, or 0 for a null handle.
 *
 * # Safety
 * `inst` must be null or a live instance handle.
 */
size_t bm_instance_variable_count(const BmInstance *inst);

/**
 * Merges the instance. Null `scheme` or `distance` falls back to the
 * instance file's values, then to `all` and `hamming`.
 *
 * # Safety
 * `inst` must be a live instance handle; `scheme` and `distance` null or
 * NUL-terminated; `out` writable.
 */
BmStatus bm_merge(const BmInstance *inst, const char *scheme, const char *distance, BmResult **out);

/**
 * Number of selected models, or 0 for a null handle.
 *
 * # Safety
 * `res` must be null or a live result handle.
 */
size_t bm_result_model_count(const BmResult *res);

/**
 * Serializes the result as `{"models":[{"literals":[..],"witness":..}]}`.
 * Free the string with [`bm_string_free`].
 *
 * # Safety
 * `res` must be a live result handle and `out` writable.
 */
BmStatus bm_result_to_json(const BmResult *res, char **out);

/**
 * # Safety
 * `res` must be null or a result handle not yet freed.
 */
void bm_result_free(BmResult *res);

/**
 * Maximal consistent subsets as `{"maxcons":[[1,3],...]}` with 1-based
 * formula indices. Free the string with [`bm_string_free`].
 *
 * # Safety
 * `inst` must be a live instance handle and `out` writable.
 */
BmStatus bm_maxcons_json(const BmInstance *inst, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void bm_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* BELIEFMERGE_H */
