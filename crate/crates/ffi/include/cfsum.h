#ifndef CFSUM_H
#define CFSUM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum CfsumStatus {
  CFSUM_STATUS_OK = 0,
  CFSUM_STATUS_NULL_POINTER = 1,
  CFSUM_STATUS_INVALID_UTF8 = 2,
  CFSUM_STATUS_PARSE = 3,
  CFSUM_STATUS_DOMAIN = 4,
  CFSUM_STATUS_ARITHMETIC = 5,
  CFSUM_STATUS_FIELD_MISMATCH = 6,
  CFSUM_STATUS_LENGTH = 7,
  CFSUM_STATUS_DEGENERATE = 8,
  CFSUM_STATUS_PRECISION_EXHAUSTED = 9,
  CFSUM_STATUS_INTERNAL = 10,
} CfsumStatus;

/**
 * Opaque handle to an exact element `(a + b sqrt(D)) / c`.
 */
typedef struct CfsumSurd CfsumSurd;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next call into the library from the same thread.
 */
const char *cfsum_last_error(void);

/**
 * Parses `(a+b*sqrt(D))/c`, an integer, or a rational `p/q`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum CfsumStatus cfsum_surd_parse(const char *text, struct CfsumSurd **out);

/**
 * The purely periodic number with period `digits[0..len]`.
 *
 * # Safety
 * `digits` must point to `len` readable integers; `out` must be writable.
 */
enum CfsumStatus cfsum_surd_from_word(const int64_t *digits, size_t len, struct CfsumSurd **out);

/**
 * # Safety
 * `x` must be NULL or a handle from this library not yet freed.
 */
void cfsum_surd_free(struct CfsumSurd *x);

/**
 * Canonical text form, parseable by [`cfsum_surd_parse`].
 *
 * # Safety
 * `x` must be a live handle; `out` must be writable.
 */
enum CfsumStatus cfsum_surd_to_string(const struct CfsumSurd *x, char **out);

/**
 * Nearest double.
 *
 * # Safety
 * `x` must be a live handle; `out` must be writable.
 */
enum CfsumStatus cfsum_surd_to_f64(const struct CfsumSurd *x, double *out);

/**
 * Exact equality.
 *
 * # Safety
 * `x` and `y` must be live handles; `out` must be writable.
 */
enum CfsumStatus cfsum_surd_equal(const struct CfsumSurd *x, const struct CfsumSurd *y, bool *out);

/**
 * Continued fraction of an irrational `x` as `[a0;p0,p1,...]`.
 *
 * # Safety
 * `x` must be a live handle; `out` must be writable.
 */
enum CfsumStatus cfsum_expand(const struct CfsumSurd *x, char **out);

/**
 * Exact weighted error sum `f(s)` for purely periodic `xi` and integer `s >= 1`.
 *
 * # Safety
 * `xi` must be a live handle; `out` must be writable.
 */
enum CfsumStatus cfsum_errorsum(const struct CfsumSurd *xi, uint32_t s, struct CfsumSurd **out);

/**
 * Unit `k_{N-1} xi + k_{N-2}` of the primitive period and its norm.
 *
 * # Safety
 * `xi` must be a live handle; `out` and `norm` must be writable.
 */
enum CfsumStatus cfsum_fundamental_unit(const struct CfsumSurd *xi,
                                        struct CfsumSurd **out,
                                        int32_t *norm);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be NULL or a string from this library not yet freed.
 */
void cfsum_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CFSUM_H */
