#ifndef GOLDEN_H
#define GOLDEN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result code of every fallible call.
 */
typedef enum GoldenStatus {
  GOLDEN_STATUS_OK = 0,
  GOLDEN_STATUS_NULL_POINTER = 1,
  GOLDEN_STATUS_INVALID_UTF8 = 2,
  GOLDEN_STATUS_PARSE = 3,
  GOLDEN_STATUS_DOMAIN = 4,
  GOLDEN_STATUS_DIVISION_BY_ZERO = 5,
  GOLDEN_STATUS_NOT_ADMISSIBLE = 6,
  GOLDEN_STATUS_EXCEPTIONAL_WORD = 7,
  GOLDEN_STATUS_NOT_FOUND = 8,
  GOLDEN_STATUS_NON_MATCHING_EXACT = 9,
  GOLDEN_STATUS_CONSTRUCTION = 10,
  GOLDEN_STATUS_NUMERIC = 11,
  GOLDEN_STATUS_INVALID_CONFIG = 12,
  GOLDEN_STATUS_OUT_OF_RANGE = 13,
  GOLDEN_STATUS_INTERNAL = 14,
  GOLDEN_STATUS_PANIC = 15,
} GoldenStatus;

/*
 Field operation selector for `golden_number_arith`.
 */
typedef enum GoldenOp {
  GOLDEN_OP_ADD = 0,
  GOLDEN_OP_SUB = 1,
  GOLDEN_OP_MUL = 2,
  GOLDEN_OP_DIV = 3,
} GoldenOp;

/*
 An enumerated set of matching words with their intervals.
 */
typedef struct GoldenAtlas GoldenAtlas;

/*
 An exact step-function density on [−1, 1].
 */
typedef struct GoldenDensity GoldenDensity;

/*
 An element of Q(β).
 */
typedef struct GoldenNumber GoldenNumber;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static string.
 */
const char *golden_version(void);

/*
 Copy of the last error message on this thread, or NULL if none.
 Release with `golden_string_free`.
 */
char *golden_last_error(void);

/*
 Releases a string returned by this library. NULL is ignored.

 # Safety
 `s` must come from this library and not be freed twice.
 */
void golden_string_free(char *s);

/*
 Parses "p/q + r/s*b" (or an integer or fraction).

 # Safety
 `text` must be a valid C string and `out` writable.
 */
enum GoldenStatus golden_number_parse(const char *text, struct GoldenNumber **out);

/*
 a/b + (c/d)·β.

 # Safety
 `out` must be writable.
 */
enum GoldenStatus golden_number_from_parts(int64_t a,
                                           int64_t b,
                                           int64_t c,
                                           int64_t d,
                                           struct GoldenNumber **out);

/*
 # Safety
 `x` must come from this library and not be freed twice.
 */
void golden_number_free(struct GoldenNumber *x);

/*
 Exact text form.

 # Safety
 `x` must be a live handle and `out` writable.
 */
enum GoldenStatus golden_number_to_string(const struct GoldenNumber *x, char **out);

/*
 Decimal text with `digits` significant digits.

 # Safety
 `x` must be a live handle and `out` writable.
 */
enum GoldenStatus golden_number_to_decimal(const struct GoldenNumber *x,
                                           uintptr_t digits,
                                           char **out);

/*
 Nearest double; NaN for a null handle.

 # Safety
 `x` must be a live handle or NULL.
 */
double golden_number_to_f64(const struct GoldenNumber *x);

/*
 Exact comparison: −1, 0 or 1, written to `out`.

 # Safety
 `x`, `y` must be live handles and `out` writable.
 */
enum GoldenStatus golden_number_cmp(const struct GoldenNumber *x,
                                    const struct GoldenNumber *y,
                                    int *out);

/*
 x op y as a new handle.

 # Safety
 `x`, `y` must be live handles and `out` writable.
 */
enum GoldenStatus golden_number_arith(enum GoldenOp op,
                                      const struct GoldenNumber *x,
                                      const struct GoldenNumber *y,
                                      struct GoldenNumber **out);

/*
 Matching index of S_α. On a match `kind` is 0 and `word` receives the
 matching word; when the critical orbits turn periodic first, `kind` is
 1, `m` is 0 and `word` is NULL.

 # Safety
 `alpha` must be a live handle; the out pointers must be writable.
 */
enum GoldenStatus golden_matching_index(const struct GoldenNumber *alpha,
                                        uintptr_t max_iter,
                                        int *kind,
                                        uintptr_t *m,
                                        char **word);

/*
 Enumerates all matching words of length at most `max_len`.

 # Safety
 `out` must be writable.
 */
enum GoldenStatus golden_atlas_enumerate(uintptr_t max_len, struct GoldenAtlas **out);

/*
 # Safety
 `atlas` must come from this library and not be freed twice.
 */
void golden_atlas_free(struct GoldenAtlas *atlas);

/*
 Number of words; 0 for a null handle.

 # Safety
 `atlas` must be a live handle or NULL.
 */
uintptr_t golden_atlas_len(const struct GoldenAtlas *atlas);

/*
 Word, left and right endpoint of entry `index` (sorted by descending
 left endpoint). Any of the out pointers may be NULL to skip it.

 # Safety
 `atlas` must be a live handle; non-null out pointers must be writable.
 */
enum GoldenStatus golden_atlas_entry(const struct GoldenAtlas *atlas,
                                     uintptr_t index,
                                     char **word,
                                     struct GoldenNumber **alpha_minus,
                                     struct GoldenNumber **alpha_plus);

/*
 The atlas as CSV text.

 # Safety
 `atlas` must be a live handle and `out` writable.
 */
enum GoldenStatus golden_atlas_to_csv(const struct GoldenAtlas *atlas, char **out);

/*
 Invariant density of S_α (`map` = 'S') or T_α (`map` = 'T').

 # Safety
 `alpha` must be a live handle and `out` writable.
 */
enum GoldenStatus golden_density(const struct GoldenNumber *alpha,
                                 char map,
                                 struct GoldenDensity **out);

/*
 # Safety
 `f` must come from this library and not be freed twice.
 */
void golden_density_free(struct GoldenDensity *f);

/*
 Number of constant pieces; 0 for a null handle.

 # Safety
 `f` must be a live handle or NULL.
 */
uintptr_t golden_density_pieces(const struct GoldenDensity *f);

/*
 f(x) as a new handle.

 # Safety
 `f`, `x` must be live handles and `out` writable.
 */
enum GoldenStatus golden_density_eval(const struct GoldenDensity *f,
                                      const struct GoldenNumber *x,
                                      struct GoldenNumber **out);

/*
 Mass of [−1/β, 1/β].

 # Safety
 `f` must be a live handle and `out` writable.
 */
enum GoldenStatus golden_density_measure_j0(const struct GoldenDensity *f,
                                            struct GoldenNumber **out);

/*
 The density as CSV text.

 # Safety
 `f` must be a live handle and `out` writable.
 */
enum GoldenStatus golden_density_to_csv(const struct GoldenDensity *f, char **out);

/*
 Exact frequencies of the digit 0 for S_α and T_α. Either out pointer
 may be NULL.

 # Safety
 `alpha` must be a live handle; non-null out pointers must be writable.
 */
enum GoldenStatus golden_frequencies(const struct GoldenNumber *alpha,
                                     struct GoldenNumber **freq_s_out,
                                     struct GoldenNumber **freq_t_out);

/*
 Birkhoff frequency of the digit 0 along `iterations` steps of the map
 'S', 'T' or 'B', seeded and reproducible.

 # Safety
 `out` must be writable.
 */
enum GoldenStatus golden_simulate_zero_frequency(char map,
                                                 double alpha,
                                                 uint64_t iterations,
                                                 uint64_t seed,
                                                 double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GOLDEN_H */
