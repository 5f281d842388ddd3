#ifndef TAILSPACE_H
#define TAILSPACE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call. Library errors map one-to-one onto the reason
 * codes printed by the command-line tool.
 */
typedef enum TsStatus {
  TS_STATUS_OK = 0,
  TS_STATUS_NULL_POINTER = 1,
  TS_STATUS_INVALID_UTF8 = 2,
  TS_STATUS_BUFFER_TOO_SMALL = 3,
  TS_STATUS_PANIC = 4,
  TS_STATUS_CAPACITY = 10,
  TS_STATUS_PARAM = 11,
  TS_STATUS_DIMENSION = 12,
  TS_STATUS_RANGE = 13,
  TS_STATUS_KIND = 14,
  TS_STATUS_COORDINATE = 15,
  TS_STATUS_MEAN = 16,
  TS_STATUS_GENERATOR = 17,
  TS_STATUS_DISCONNECTED = 18,
  TS_STATUS_TAIL = 19,
  TS_STATUS_SEARCH_EXHAUSTED = 20,
  TS_STATUS_INFEASIBLE = 21,
  TS_STATUS_SOLVER = 22,
  TS_STATUS_FORMAT = 23,
  TS_STATUS_IO = 24,
  TS_STATUS_JSON = 25,
} TsStatus;

/**
 * A binary linear code.
 */
typedef struct TsCode TsCode;

/**
 * A real function on `{-1,1}^n`.
 */
typedef struct TsFunction TsFunction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next failing call on the same thread.
 */
const char *ts_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *ts_version(void);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void ts_string_free(char *s);

/**
 * Builds a function from `2^n` values; the kind is inferred.
 *
 * # Safety
 * `values` must point to `len` readable doubles and `out` must be writable.
 */
enum TsStatus ts_function_new(size_t n, const double *values, size_t len, struct TsFunction **out);

/**
 * Parses a function file.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
enum TsStatus ts_function_from_json(const char *json, struct TsFunction **out);

/**
 * Serializes a function file; release the string with [`ts_string_free`].
 *
 * # Safety
 * `f` must be a live handle and `out` writable.
 */
enum TsStatus ts_function_to_json(const struct TsFunction *f, char **out);

/**
 * # Safety
 * `f` must come from this library or be null.
 */
void ts_function_free(struct TsFunction *f);

/**
 * Number of input bits, or 0 for a null handle.
 *
 * # Safety
 * `f` must be a live handle or null.
 */
size_t ts_function_dim(const struct TsFunction *f);

/**
 * Copies the `2^n` values into `out`.
 *
 * # Safety
 * `f` must be a live handle and `out` must hold `len` doubles.
 */
enum TsStatus ts_function_values(const struct TsFunction *f, double *out, size_t len);

/**
 * Fourier coefficients indexed by subset bitmask.
 *
 * # Safety
 * `f` must be a live handle and `out` must hold `len` doubles.
 */
enum TsStatus ts_fwht(const struct TsFunction *f, double *out, size_t len);

/**
 * `P_t f` as a new handle.
 *
 * # Safety
 * `f` must be a live handle and `out` writable.
 */
enum TsStatus ts_heat(const struct TsFunction *f, double t, struct TsFunction **out);

/**
 * Largest `k` with every coefficient of degree `1..=k` zero (and the mean
 * too when `include_constant`); `-1` when the mean is nonzero and
 * `include_constant` is set.
 *
 * # Safety
 * `f` must be a live handle and `out` writable.
 */
enum TsStatus ts_tail_level(const struct TsFunction *f, bool include_constant, int64_t *out);

/**
 * `Σ_i P[f(x) != f(x ⊕ e_i)]` for a Boolean-valued function. `exact`, if
 * not null, receives the value as a `num/den` string.
 *
 * # Safety
 * `f` must be a live handle; `value` must be writable; `exact` writable or null.
 */
enum TsStatus ts_total_pivotal(const struct TsFunction *f, double *value, char **exact);

/**
 * Span of `count` generator rows; bit `i` of a row is coordinate `i + 1`.
 *
 * # Safety
 * `rows` must point to `count` readable words (or be null when `count` is
 * 0) and `out` must be writable.
 */
enum TsStatus ts_code_new(size_t length, const uint32_t *rows, size_t count, struct TsCode **out);

/**
 * # Safety
 * `c` must come from this library or be null.
 */
void ts_code_free(struct TsCode *c);

/**
 * Dimension, or 0 for a null handle.
 *
 * # Safety
 * `c` must be a live handle or null.
 */
size_t ts_code_dim(const struct TsCode *c);

/**
 * # Safety
 * `c` must be a live handle and `out` writable.
 */
enum TsStatus ts_code_dual(const struct TsCode *c, struct TsCode **out);

/**
 * Least weight of a nonzero codeword; `UINT32_MAX` for the zero code.
 *
 * # Safety
 * `c` must be a live handle and `out` writable.
 */
enum TsStatus ts_code_min_weight(const struct TsCode *c, uint32_t *out);

/**
 * `±1` indicator of the code as a function handle.
 *
 * # Safety
 * `c` must be a live handle and `out` writable.
 */
enum TsStatus ts_code_indicator(const struct TsCode *c, struct TsFunction **out);

/**
 * The sharp constant `κ(p)` for `p > 1`, `p != 2`.
 *
 * # Safety
 * `out` must be writable.
 */
enum TsStatus ts_kappa(double p, double *out);

/**
 * Runs one seeded sweep with default grids and reports its totals.
 *
 * # Safety
 * `check_id` must be a NUL-terminated string; the out-pointers writable.
 */
enum TsStatus ts_run_sweep(const char *check_id,
                           size_t trials,
                           uint64_t seed,
                           size_t n_max,
                           size_t *total,
                           size_t *violations);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TAILSPACE_H */
