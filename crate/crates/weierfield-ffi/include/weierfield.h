#ifndef WEIERFIELD_H
#define WEIERFIELD_H

/* Generated by cbindgen from weierfield-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum wf_status {
  WF_OK = 0,
  WF_NULL_POINTER = 1,
  WF_INVALID_ARGUMENT = 2,
  WF_PARSE_ERROR = 3,
  WF_NUMERIC_ERROR = 4,
} wf_status;

/**
 * Opaque handle to a Weierstrass field with its harmonic extension.
 */
typedef struct wf_field wf_field;

/**
 * Opaque handle to a trigonometric polynomial base function.
 */
typedef struct wf_trig wf_trig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Returns the library version as a static NUL-terminated string.
 */
const char *wf_version(void);

/**
 * Copies the current thread's last error message into `buf` (truncating if
 * needed) and returns the full message length in bytes, excluding the NUL.
 *
 * # Safety
 * `buf` must point to at least `cap` writable bytes, or be NULL (then only
 * the length is returned).
 */
size_t wf_last_error_message(char *buf, size_t cap);

/**
 * Parses a base function from its JSON form
 * `{"d": int, "terms": [{"k": [int,...], "re": float, "im": float}, ...]}`.
 * On success writes a new handle to `out`; free with [`wf_trig_free`].
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum wf_status wf_trig_from_json(const char *json, struct wf_trig **out);

/**
 * Frees a handle returned by [`wf_trig_from_json`]. NULL is a no-op.
 *
 * # Safety
 * `t` must be a pointer previously returned by this library and not yet
 * freed.
 */
void wf_trig_free(struct wf_trig *t);

/**
 * Boundary dimension d of the base function; 0 for a NULL handle.
 *
 * # Safety
 * `t` must be a live handle or NULL.
 */
size_t wf_trig_dim(const struct wf_trig *t);

/**
 * Evaluates φ(x). `x` must have length `dim`.
 *
 * # Safety
 * `t` must be a live handle; `x` must point to `dim` readable doubles;
 * `out` must be writable.
 */
enum wf_status wf_trig_eval(const struct wf_trig *t, const double *x, size_t dim, double *out);

/**
 * Builds a Weierstrass field over a base function; the base handle stays
 * owned by the caller. Free the result with [`wf_field_free`].
 *
 * # Safety
 * `t` must be a live handle; `out` must be a valid pointer.
 */
enum wf_status wf_field_new(const struct wf_trig *t,
                            double b,
                            double tail_tol,
                            struct wf_field **out);

/**
 * Frees a handle returned by [`wf_field_new`]. NULL is a no-op.
 *
 * # Safety
 * `f` must be a pointer previously returned by this library and not yet
 * freed.
 */
void wf_field_free(struct wf_field *f);

/**
 * Boundary dimension d of the field; 0 for a NULL handle.
 *
 * # Safety
 * `f` must be a live handle or NULL.
 */
size_t wf_field_dim(const struct wf_field *f);

/**
 * Evaluates the boundary function f_{b,φ}(x). `x` must have length `dim`.
 *
 * # Safety
 * `f` must be a live handle; `x` must point to `dim` readable doubles;
 * `out` must be writable.
 */
enum wf_status wf_field_eval_boundary(const struct wf_field *f,
                                      const double *x,
                                      size_t dim,
                                      double *out);

/**
 * Evaluates the harmonic-extension jet at (x, y), y > 0.
 *
 * Writes the value, the d+1 gradient components (vertical derivative last),
 * and the (d+1)(d+2)/2 upper-triangular Hessian entries in row order. Any
 * output pointer may be NULL to skip that part.
 *
 * # Safety
 * `f` must be a live handle; `x` must point to `dim` readable doubles;
 * non-NULL outputs must have the stated capacities.
 */
enum wf_status wf_field_jet(const struct wf_field *f,
                            const double *x,
                            size_t dim,
                            double y,
                            double *out_value,
                            double *out_gradient,
                            double *out_hessian_upper);

/**
 * Hausdorff-dimension lower bound log(beta/alpha^d)/log(1/alpha) for nested
 * cube families. `out_valid` receives whether the strict parameter order
 * alpha < beta^(1/d) < 1 holds; the bound value is written regardless.
 *
 * # Safety
 * `out_bound` and `out_valid` must be valid pointers.
 */
enum wf_status wf_hungerford_bound(double alpha,
                                   double beta,
                                   size_t dim,
                                   double *out_bound,
                                   bool *out_valid);

/**
 * Radius-driven dimension lower bound
 * d − c·bloch·log(1/beta) / (radius·cos(theta)·log(n)).
 *
 * # Safety
 * `out_bound` must be a valid pointer.
 */
enum wf_status wf_makarov_bound(size_t dim,
                                double c_const,
                                double bloch_norm,
                                double beta,
                                double radius,
                                double theta,
                                uint32_t n,
                                double *out_bound);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WEIERFIELD_H */
