/* C interface to the bjorth library. Generated by cbindgen; do not edit. */

#ifndef BJORTH_H
#define BJORTH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every fallible call.
 */
typedef enum BjStatus {
  BJ_STATUS_OK = 0,
  BJ_STATUS_NULL_POINTER = 1,
  /**
   * Ill-formed input: unparseable JSON, nonfinite numbers, invalid shapes.
   */
  BJ_STATUS_INVALID_INPUT = 2,
  BJ_STATUS_DIMENSION_MISMATCH = 3,
  /**
   * Legal data outside the operation's domain, such as reconstructing at
   * a point of the orthogonality interval.
   */
  BJ_STATUS_PRECONDITION_VIOLATION = 4,
  BJ_STATUS_INTERNAL_ERROR = 5,
} BjStatus;

/**
 * Outcome tag of a companion-function evaluation.
 */
typedef enum BjCompanionKind {
  /**
   * The companion value exists; the `f_alpha` output is meaningful.
   */
  BJ_COMPANION_KIND_VALUE = 0,
  /**
   * The point lies in the orthogonality interval, where no finite
   * coefficient is needed.
   */
  BJ_COMPANION_KIND_ORTHOGONAL_TO_Y = 1,
  /**
   * The norm has a kink at this point; no value is defined.
   */
  BJ_COMPANION_KIND_NOT_DIFFERENTIABLE = 2,
} BjCompanionKind;

/**
 * Opaque handle to a normed space.
 */
typedef struct BjSpace BjSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a JSON space description (`{"dim": n, "norm": {...}}`) into a
 * fresh handle, owned by the caller.
 *
 * # Safety
 * `json` must point to a NUL-terminated string and `out` to writable
 * storage for one pointer.
 */
enum BjStatus bj_space_from_json(const char *json, struct BjSpace **out);

/**
 * Writes the dimension of the space.
 *
 * # Safety
 * `space` must be a live handle from [`bj_space_from_json`]; `out` must be
 * writable.
 */
enum BjStatus bj_space_dim(const struct BjSpace *space, size_t *out);

/**
 * Releases a space handle. Passing NULL is a no-op.
 *
 * # Safety
 * `space` must be a handle from [`bj_space_from_json`] that has not been
 * freed, or NULL.
 */
void bj_space_free(struct BjSpace *space);

/**
 * Writes the norm of the vector `coords[0..len]`.
 *
 * # Safety
 * `space` must be a live handle; `coords` must point to `len` doubles;
 * `out` must be writable.
 */
enum BjStatus bj_norm(const struct BjSpace *space, const double *coords, size_t len, double *out);

/**
 * Writes whether `u` is Birkhoff-James orthogonal to `v`, that is whether
 * every multiple of `v` added to `u` keeps the norm at least as large.
 * `u` must be nonzero; `v` may be anything.
 *
 * # Safety
 * `space` must be a live handle; `u` and `v` must point to `u_len` and
 * `v_len` doubles; `out` must be writable.
 */
enum BjStatus bj_is_orthogonal(const struct BjSpace *space,
                               const double *u,
                               size_t u_len,
                               const double *v,
                               size_t v_len,
                               bool *out);

/**
 * Computes the closed interval of coefficients `a` with `x + a*y`
 * orthogonal to `y`, writing its endpoints and the norm value on it.
 * `x` and `y` must be linearly independent.
 *
 * # Safety
 * `space` must be a live handle; `x` and `y` must point to `x_len` and
 * `y_len` doubles; the three out-pointers must be writable.
 */
enum BjStatus bj_ortho_interval(const struct BjSpace *space,
                                const double *x,
                                size_t x_len,
                                const double *y,
                                size_t y_len,
                                double *out_lower,
                                double *out_upper,
                                double *out_min_value);

/**
 * Evaluates the companion function of the pencil `x + a*y` at `alpha`.
 * `out_kind` receives the outcome tag; `out_f_alpha` receives the value
 * when the tag is `BJ_COMPANION_KIND_VALUE` and NaN otherwise.
 *
 * # Safety
 * `space` must be a live handle; `x` and `y` must point to `x_len` and
 * `y_len` doubles; both out-pointers must be writable.
 */
enum BjStatus bj_companion(const struct BjSpace *space,
                           const double *x,
                           size_t x_len,
                           const double *y,
                           size_t y_len,
                           double alpha,
                           enum BjCompanionKind *out_kind,
                           double *out_f_alpha);

/**
 * Rebuilds the norm of `x + alpha*y` from the companion function by the
 * exponentiated integral, writing the rebuilt value, the directly computed
 * value, and their relative difference. `alpha` must lie outside the
 * orthogonality interval.
 *
 * # Safety
 * `space` must be a live handle; `x` and `y` must point to `x_len` and
 * `y_len` doubles; the three out-pointers must be writable.
 */
enum BjStatus bj_reconstruct(const struct BjSpace *space,
                             const double *x,
                             size_t x_len,
                             const double *y,
                             size_t y_len,
                             double alpha,
                             double *out_reconstructed,
                             double *out_direct,
                             double *out_rel_error);

/**
 * Runs the operator classification on a JSON matrix (`{"matrix": [[...]]}`):
 * orthogonality preservation, the scaled-isometry test, and, for invertible
 * nonzero operators, the interval-equality comparison. Writes a freshly
 * allocated JSON report to `out_json`; release it with [`bj_string_free`].
 *
 * # Safety
 * `space` must be a live handle; `operator_json` must be NUL-terminated;
 * `out_json` must be writable.
 */
enum BjStatus bj_theorem_suite_json(const struct BjSpace *space,
                                    const char *operator_json,
                                    uint64_t seed,
                                    uint32_t num_pairs,
                                    char **out_json);

/**
 * Releases a string returned through a `char **` output. Passing NULL is a
 * no-op.
 *
 * # Safety
 * `s` must be a string returned by this library that has not been freed,
 * or NULL.
 */
void bj_string_free(char *s);

/**
 * The message of the last failing call on this thread, or an empty string.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *bj_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BJORTH_H */
