#ifndef GTL_H
#define GTL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum GtlStatus {
  GTL_STATUS_OK = 0,
  GTL_STATUS_NULL_ARGUMENT = 1,
  GTL_STATUS_INVALID_UTF8 = 2,
  GTL_STATUS_PARSE_ERROR = 3,
  GTL_STATUS_INVALID_INPUT = 4,
  GTL_STATUS_BUDGET_EXCEEDED = 5,
  GTL_STATUS_INTERNAL = 6,
  GTL_STATUS_PANIC = 7,
} GtlStatus;

/**
 * A parsed formula.
 */
typedef struct GtlFormula GtlFormula;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call on the same thread.
 */
const char *gtl_last_error(void);

/**
 * Library version as a static string.
 */
const char *gtl_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void gtl_string_free(char *s);

/**
 * # Safety
 * `text` must be a nul-terminated string and `out` writable.
 */
enum GtlStatus gtl_formula_parse(const char *text, struct GtlFormula **out);

/**
 * # Safety
 * `f` must be null or a handle from [`gtl_formula_parse`] not yet freed.
 */
void gtl_formula_free(struct GtlFormula *f);

/**
 * Canonical text of a formula, sugar expanded.
 *
 * # Safety
 * `f` must be a live handle and `out` writable.
 */
enum GtlStatus gtl_formula_to_string(const struct GtlFormula *f, char **out);

/**
 * Decides validity with the given cap on the closure size (0 selects the
 * default). When the formula is falsifiable and `witness_json` is not null,
 * the witness quasimodel is written there; otherwise it is set to null.
 *
 * # Safety
 * `f` must be a live handle, `valid` writable, `witness_json` null or
 * writable.
 */
enum GtlStatus gtl_decide(const struct GtlFormula *f,
                          size_t budget,
                          bool *valid,
                          char **witness_json);

/**
 * Value of `f` at `moment` in a real model, as `"num/den"` text.
 *
 * # Safety
 * String arguments must be nul-terminated, `f` live and `out` writable.
 */
enum GtlStatus gtl_real_eval(const char *model_json,
                             const struct GtlFormula *f,
                             const char *moment,
                             char **out);

/**
 * Whether `f` takes value 1 at every moment of a real model.
 *
 * # Safety
 * `model_json` must be nul-terminated, `f` live and `out` writable.
 */
enum GtlStatus gtl_real_globally_true(const char *model_json,
                                      const struct GtlFormula *f,
                                      bool *out);

/**
 * Whether `f` holds at every point of a bi-relational model.
 *
 * # Safety
 * `model_json` must be nul-terminated, `f` live and `out` writable.
 */
enum GtlStatus gtl_birel_globally_true(const char *model_json,
                                       const struct GtlFormula *f,
                                       bool *out);

/**
 * Checks a proof. `failed_line` receives 0 when the proof checks, else the
 * 1-based number of the first bad line (with the reason in
 * [`gtl_last_error`]).
 *
 * # Safety
 * `proof_json` must be nul-terminated and `failed_line` writable.
 */
enum GtlStatus gtl_check_proof(const char *proof_json, size_t *failed_line);

/**
 * Validates a quasimodel. `violation` receives null when every condition
 * holds, else a description of the first violated one.
 *
 * # Safety
 * `json` must be nul-terminated and `violation` writable.
 */
enum GtlStatus gtl_validate_quasimodel(const char *json, char **violation);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GTL_H */
