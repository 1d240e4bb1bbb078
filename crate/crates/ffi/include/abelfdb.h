#ifndef ABELFDB_H
#define ABELFDB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AbelfdbAlgorithm {
  ABELFDB_ALGORITHM_CLASSICAL = 0,
  ABELFDB_ALGORITHM_CODERIVATION = 1,
} AbelfdbAlgorithm;

typedef enum AbelfdbStatus {
  ABELFDB_STATUS_OK = 0,
  ABELFDB_STATUS_NULL_POINTER = 1,
  ABELFDB_STATUS_INVALID_ARGUMENT = 2,
  ABELFDB_STATUS_PARSE = 3,
  ABELFDB_STATUS_QUERY_BEYOND_CAP = 4,
  ABELFDB_STATUS_NOT_INVERTIBLE = 5,
  ABELFDB_STATUS_ALPHABET_MISMATCH = 6,
  ABELFDB_STATUS_SHAPE_MISMATCH = 7,
  ABELFDB_STATUS_NUMERIC = 8,
  ABELFDB_STATUS_ALGORITHM_MISMATCH = 9,
  ABELFDB_STATUS_PANIC = 10,
} AbelfdbStatus;

/**
 * Antipode evaluator for a fixed `(m, mbar)`, with its memo.
 */
typedef struct AbelfdbHopf AbelfdbHopf;

/**
 * Truncated noncommutative series with exact rational coefficients.
 */
typedef struct AbelfdbSeries AbelfdbSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failing call on this thread, or NULL. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *abelfdb_last_error(void);

/**
 * # Safety
 * `s` must come from this library or be NULL.
 */
void abelfdb_string_free(char *s);

/**
 * Parses the JSON form `{"m", "cap", "terms": [{"word", "coeff"}]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum AbelfdbStatus abelfdb_series_from_json(const char *json, struct AbelfdbSeries **out);

/**
 * # Safety
 * `s` must be a live series handle; `out` must be writable.
 */
enum AbelfdbStatus abelfdb_series_to_json(const struct AbelfdbSeries *s, char **out);

/**
 * # Safety
 * `s` must come from this library or be NULL; it must not be used afterwards.
 */
void abelfdb_series_free(struct AbelfdbSeries *s);

/**
 * `c_{A,m}` truncated at degree `cap` from the Devlin recursion.
 *
 * # Safety
 * `out` must be writable.
 */
enum AbelfdbStatus abelfdb_abel_series(size_t m, size_t cap, struct AbelfdbSeries **out);

/**
 * `sum_k k! x_1^k` over `m` letters, truncated at `cap`.
 *
 * # Safety
 * `out` must be writable.
 */
enum AbelfdbStatus abelfdb_ferfera_series(size_t m, size_t cap, struct AbelfdbSeries **out);

/**
 * # Safety
 * `a`, `b` must be live handles; `out` must be writable.
 */
enum AbelfdbStatus abelfdb_series_shuffle(const struct AbelfdbSeries *a,
                                          const struct AbelfdbSeries *b,
                                          struct AbelfdbSeries **out);

/**
 * # Safety
 * `a` must be a live handle; `out` must be writable.
 */
enum AbelfdbStatus abelfdb_series_shuffle_inverse(const struct AbelfdbSeries *a,
                                                  struct AbelfdbSeries **out);

/**
 * Coefficient of `word` (such as `x1.x2`, or `e`) as a `p/q` string.
 *
 * # Safety
 * `s` must be a live handle, `word` a NUL-terminated string, `out` writable.
 */
enum AbelfdbStatus abelfdb_series_coefficient(const struct AbelfdbSeries *s,
                                              const char *word,
                                              char **out);

/**
 * # Safety
 * `a`, `b` must be live handles; `out` must be writable.
 */
enum AbelfdbStatus abelfdb_series_equal(const struct AbelfdbSeries *a,
                                        const struct AbelfdbSeries *b,
                                        int *out);

/**
 * Antipode evaluator over `m` letters with roots `1..=mbar`,
 * `m - 1 <= mbar <= m`.
 *
 * # Safety
 * `out` must be writable.
 */
enum AbelfdbStatus abelfdb_hopf_new(size_t m, size_t mbar, struct AbelfdbHopf **out);

/**
 * # Safety
 * `h` must come from [`abelfdb_hopf_new`] or be NULL.
 */
void abelfdb_hopf_free(struct AbelfdbHopf *h);

/**
 * `S a[root; word]` rendered as text.
 *
 * # Safety
 * `h` must be a live handle, `word` NUL-terminated, `out` writable.
 */
enum AbelfdbStatus abelfdb_hopf_antipode(struct AbelfdbHopf *h,
                                         size_t root,
                                         const char *word,
                                         enum AbelfdbAlgorithm algorithm,
                                         char **out);

/**
 * Center check for `u_1 = cos`, `u_2 = sin` on `[0, omega]` with `steps`
 * RK4 steps; writes `|z(omega) - r|`.
 *
 * # Safety
 * `out_error` must be writable.
 */
enum AbelfdbStatus abelfdb_center_error(double omega, size_t steps, double r, double *out_error);

/**
 * Runs a verification suite by name and writes the JSON report and the
 * overall verdict (1 pass, 0 fail).
 *
 * # Safety
 * `suite` must be NUL-terminated; `out_json` and `out_pass` writable.
 */
enum AbelfdbStatus abelfdb_verify(const char *suite,
                                  size_t m,
                                  size_t cap,
                                  size_t grade,
                                  uint64_t seed,
                                  char **out_json,
                                  int *out_pass);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ABELFDB_H */
