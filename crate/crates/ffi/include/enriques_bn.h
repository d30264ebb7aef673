#ifndef ENRIQUES_BN_H
#define ENRIQUES_BN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Number of coordinates of a class.
 */
#define EBN_RANK 10

typedef enum EbnStatus {
  EBN_STATUS_OK = 0,
  EBN_STATUS_NULL_POINTER = 1,
  EBN_STATUS_INVALID_UTF8 = 2,
  EBN_STATUS_PARSE = 3,
  EBN_STATUS_DOMAIN = 4,
  EBN_STATUS_SEARCH_EXHAUSTED = 5,
  EBN_STATUS_INVALID_ARGUMENT = 6,
  EBN_STATUS_PANIC = 7,
} EbnStatus;

/**
 * Opaque divisor class.
 */
typedef struct EbnClass EbnClass;

/**
 * Opaque configuration with its embedded generators.
 */
typedef struct EbnConfig EbnConfig;

typedef struct EbnCohomology {
  int64_t h0;
  int64_t h1;
  int64_t h2;
  int64_t chi;
} EbnCohomology;

typedef struct EbnGonality {
  int64_t k;
  int64_t phi;
  /**
   * `-1` when no value was found below `mu_cap`.
   */
  int64_t mu;
  int64_t mu_cap;
  int64_t floor_term;
  int64_t genus;
  int64_t clifford;
} EbnGonality;

typedef struct EbnMnBound {
  /**
   * `-1` when there are no candidates.
   */
  int64_t min_mn;
  int64_t k;
  bool holds;
  uint64_t candidates;
} EbnMnBound;

typedef struct EbnExample51 {
  int64_t n;
  int64_t lsq;
  int64_t g;
  int64_t phi;
  int64_t k;
  int64_t gon_special;
  int64_t plane_genus;
  int64_t cs_bound;
  bool cs_holds;
} EbnExample51;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL after a success.
 * Valid until the next call into this library on the same thread.
 */
const char *ebn_last_error_message(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void ebn_string_free(char *s);

/**
 * Resolves a configuration name such as `"i:2"` or `"custom:[[0,3],[3,0]]"`.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum EbnStatus ebn_config_new(const char *name, struct EbnConfig **out_config);

/**
 * # Safety
 * `config` must come from [`ebn_config_new`] and not have been freed. NULL is ignored.
 */
void ebn_config_free(struct EbnConfig *config);

/**
 * Parses a class literal; `config` may be NULL when no `E<i>` symbols occur.
 *
 * # Safety
 * `literal` must be a NUL-terminated string, `config` NULL or a live handle,
 * and `out_class` writable.
 */
enum EbnStatus ebn_class_parse(const char *literal,
                               const struct EbnConfig *config,
                               struct EbnClass **out_class);

/**
 * Builds a class from [`EBN_RANK`] coordinates and a torsion bit.
 *
 * # Safety
 * `coords` must point to `len` readable values; `out_class` must be writable.
 */
enum EbnStatus ebn_class_from_coords(const int64_t *coords,
                                     size_t len,
                                     bool torsion,
                                     struct EbnClass **out_class);

/**
 * # Safety
 * `class` must come from this library and not have been freed. NULL is ignored.
 */
void ebn_class_free(struct EbnClass *class_);

/**
 * Writes [`EBN_RANK`] coordinates to `out_coords` and the torsion bit to `out_torsion`.
 *
 * # Safety
 * `class` must be live; `out_coords` must have room for [`EBN_RANK`] values.
 */
enum EbnStatus ebn_class_coords(const struct EbnClass *class_,
                                int64_t *out_coords,
                                bool *out_torsion);

/**
 * Compact JSON literal of the class.
 *
 * # Safety
 * `class` must be live; `out_json` must be writable.
 */
enum EbnStatus ebn_class_to_json(const struct EbnClass *class_, char **out_json);

/**
 * Intersection number `a·b`.
 *
 * # Safety
 * Both handles must be live; `out_value` must be writable.
 */
enum EbnStatus ebn_class_dot(const struct EbnClass *a,
                             const struct EbnClass *b,
                             int64_t *out_value);

/**
 * # Safety
 * `class` must be live; `out_ample` must be writable.
 */
enum EbnStatus ebn_class_is_ample(const struct EbnClass *class_, bool *out_ample);

/**
 * # Safety
 * `class` must be live; `out_profile` must be writable.
 */
enum EbnStatus ebn_class_cohomology(const struct EbnClass *class_,
                                    struct EbnCohomology *out_profile);

/**
 * Gonality data of an ample class; `mu_cap <= 0` selects the default cap.
 *
 * # Safety
 * `class` must be live; `out_report` must be writable.
 */
enum EbnStatus ebn_gonality(const struct EbnClass *class_,
                            int64_t mu_cap,
                            struct EbnGonality *out_report);

/**
 * `M·N ≥ k − 1` audit over all destabilizing decompositions at degree `d`.
 *
 * # Safety
 * `class` must be live; `out_bound` must be writable.
 */
enum EbnStatus ebn_check_mn_bound(const struct EbnClass *class_,
                                  int64_t d,
                                  struct EbnMnBound *out_bound);

/**
 * `ρ(g, r, d) = g − (r+1)(g − d + r)`.
 */
int64_t ebn_rho(int64_t g, int64_t r, int64_t d);

/**
 * The family `L = n(E₁ + E₂)`, `E₁·E₂ = 2`, for `n ≥ 3`.
 *
 * # Safety
 * `out_report` must be writable.
 */
enum EbnStatus ebn_example_5_1(int64_t n, struct EbnExample51 *out_report);

/**
 * Runs the command-line front end on `argv` (without the program name).
 * Writes the process exit code and newly allocated stdout / stderr strings;
 * either string pointer may be NULL to discard it.
 *
 * # Safety
 * `argv` must point to `argc` NUL-terminated strings; `out_code` must be writable.
 */
enum EbnStatus ebn_run_cli(const char *const *argv,
                           size_t argc,
                           int32_t *out_code,
                           char **out_stdout,
                           char **out_stderr);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ENRIQUES_BN_H */
