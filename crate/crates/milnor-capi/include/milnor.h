#ifndef MILNOR_H
#define MILNOR_H

/* Generated by cbindgen from milnor-capi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible function.
 */
typedef enum MilnorStatus {
  /**
   * The call succeeded and all out-parameters were written.
   */
  MILNOR_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  MILNOR_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  MILNOR_STATUS_INVALID_UTF8 = 2,
  /**
   * The input document or built-in name could not be parsed.
   */
  MILNOR_STATUS_PARSE_ERROR = 3,
  /**
   * The hyperplane data does not define a valid arrangement for the
   * requested operation (zero normal, duplicate, not essential, ...).
   */
  MILNOR_STATUS_INVALID_ARRANGEMENT = 4,
  /**
   * The supplied modulus is not a prime number.
   */
  MILNOR_STATUS_NOT_PRIME = 5,
  /**
   * The prime is one of bad reduction for this arrangement, so exact
   * counting over it proves nothing.
   */
  MILNOR_STATUS_BAD_PRIME = 6,
  /**
   * The enumeration would exceed the configured evaluation budget.
   */
  MILNOR_STATUS_BUDGET_EXCEEDED = 7,
  /**
   * The exact result does not fit in the requested integer type; use
   * the string-returning variant instead.
   */
  MILNOR_STATUS_OVERFLOW = 8,
  /**
   * The operation is defined, but not for this arrangement (for
   * example a count polynomial of a non-Tate table).
   */
  MILNOR_STATUS_UNSUPPORTED = 9,
} MilnorStatus;

/**
 * How to count points: exhaustive enumeration, per-factor histogram
 * tables glued by convolution, or the same with character-sum shortcuts.
 */
typedef enum MilnorMethod {
  MILNOR_METHOD_BRUTE = 0,
  MILNOR_METHOD_FACTORED = 1,
  MILNOR_METHOD_FAST = 2,
} MilnorMethod;

/**
 * Opaque handle to a central hyperplane arrangement.
 */
typedef struct MilnorArrangement MilnorArrangement;

/**
 * Opaque handle to a point counter with its budget and thread settings.
 */
typedef struct MilnorCounter MilnorCounter;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The crate version as a static NUL-terminated string. Never NULL.
 */
const char *milnor_version(void);

/**
 * A message describing the most recent failure on the calling thread, or
 * an empty string if none. Never NULL; valid until the next failing call
 * on this thread.
 */
const char *milnor_last_error(void);

/**
 * Frees a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must be NULL or a pointer previously returned through a `char **`
 * out-parameter of this library, not yet freed.
 */
void milnor_string_free(char *s);

/**
 * Parses an arrangement document (JSON with rational coefficient strings)
 * into a new handle.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum MilnorStatus milnor_arrangement_parse(const char *json, struct MilnorArrangement **out);

/**
 * Creates a built-in arrangement by name: `g2`, `g4`, `a11`,
 * `boolean:N`, `g:N`, or `a:U,V`.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum MilnorStatus milnor_arrangement_builtin(const char *name, struct MilnorArrangement **out);

/**
 * Frees an arrangement handle. NULL is ignored.
 *
 * # Safety
 * `a` must be NULL or an unfreed handle from this library.
 */
void milnor_arrangement_free(struct MilnorArrangement *a);

/**
 * Ambient complex dimension, or 0 if `a` is NULL.
 *
 * # Safety
 * `a` must be NULL or a live handle.
 */
size_t milnor_arrangement_dim(const struct MilnorArrangement *a);

/**
 * Number of hyperplanes (the degree of the defining polynomial), or 0 if
 * `a` is NULL.
 *
 * # Safety
 * `a` must be NULL or a live handle.
 */
size_t milnor_arrangement_degree(const struct MilnorArrangement *a);

/**
 * Order of the monodromy acting on the Milnor fiber: the gcd of the
 * irreducible factor degrees.
 *
 * # Safety
 * `a` must be a live handle; `out` must be a valid pointer.
 */
enum MilnorStatus milnor_arrangement_monodromy_order(const struct MilnorArrangement *a,
                                                     size_t *out);

/**
 * Whether the arrangement splits as a product of at least two factors.
 *
 * # Safety
 * `a` must be a live handle; `out` must be a valid pointer.
 */
enum MilnorStatus milnor_arrangement_is_reducible(const struct MilnorArrangement *a, bool *out);

/**
 * Serializes the arrangement back to its document form.
 *
 * # Safety
 * `a` must be a live handle; `out` must be a valid pointer. Free the
 * result with [`milnor_string_free`].
 */
enum MilnorStatus milnor_arrangement_to_json(const struct MilnorArrangement *a, char **out);

/**
 * The candidate count polynomial of the Milnor fiber, printed in
 * ascending powers of `t` (for example `-15 + 60 t - ... + t^7`).
 *
 * Fails with `MILNOR_STATUS_UNSUPPORTED` when the eigenspace cohomology
 * is not of Tate type, since no candidate is defined there.
 *
 * # Safety
 * `a` must be a live handle; `out` must be a valid pointer. Free the
 * result with [`milnor_string_free`].
 */
enum MilnorStatus milnor_arrangement_candidate_polynomial(const struct MilnorArrangement *a,
                                                          char **out);

/**
 * Creates a point counter for an essential arrangement, with the default
 * evaluation budget (10^9) and one worker thread.
 *
 * # Safety
 * `a` must be a live handle; `out` must be a valid pointer. The counter
 * keeps its own copy, so `a` may be freed afterwards.
 */
enum MilnorStatus milnor_counter_new(const struct MilnorArrangement *a, struct MilnorCounter **out);

/**
 * Frees a counter handle. NULL is ignored.
 *
 * # Safety
 * `c` must be NULL or an unfreed handle from this library.
 */
void milnor_counter_free(struct MilnorCounter *c);

/**
 * Caps the number of point evaluations a single counting call may use.
 *
 * # Safety
 * `c` must be a live handle.
 */
enum MilnorStatus milnor_counter_set_budget(struct MilnorCounter *c, uint64_t budget);

/**
 * Sets the number of worker threads (minimum 1). Results never depend on
 * the thread count.
 *
 * # Safety
 * `c` must be a live handle.
 */
enum MilnorStatus milnor_counter_set_threads(struct MilnorCounter *c, size_t threads);

/**
 * Whether `p` is a prime of good reduction for this arrangement.
 * Returns false for NULL handles and for composites.
 *
 * # Safety
 * `c` must be NULL or a live handle.
 */
bool milnor_counter_is_good_prime(const struct MilnorCounter *c, uint64_t p);

/**
 * Counts points of the Milnor fiber over `F_p`, writing the exact count
 * to `out`.
 *
 * Fails with `MILNOR_STATUS_OVERFLOW` if the count does not fit in 64
 * bits; use [`milnor_counter_count_string`] then.
 *
 * # Safety
 * `c` must be a live handle; `out` must be a valid pointer.
 */
enum MilnorStatus milnor_counter_count(const struct MilnorCounter *c,
                                       uint64_t p,
                                       enum MilnorMethod method,
                                       uint64_t *out);

/**
 * Counts points of the Milnor fiber over `F_p`, returning the exact
 * count as a decimal string of unbounded size.
 *
 * # Safety
 * `c` must be a live handle; `out` must be a valid pointer. Free the
 * result with [`milnor_string_free`].
 */
enum MilnorStatus milnor_counter_count_string(const struct MilnorCounter *c,
                                              uint64_t p,
                                              enum MilnorMethod method,
                                              char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MILNOR_H */
