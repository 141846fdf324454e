#ifndef CAPPED_PROJ_H
#define CAPPED_PROJ_H

/* Generated by cbindgen from crates/ffi. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CpStatus {
  CP_STATUS_OK = 0,
  CP_STATUS_NULL_POINTER = 1,
  CP_STATUS_INVALID_INPUT = 2,
  CP_STATUS_INFEASIBLE = 3,
  CP_STATUS_CAPACITY = 4,
  CP_STATUS_INCONSISTENT = 5,
  CP_STATUS_BUFFER_TOO_SMALL = 6,
  CP_STATUS_NOT_CONVERGED = 7,
  CP_STATUS_INTERNAL = 8,
  CP_STATUS_PANIC = 9,
} CpStatus;

/**
 * Opaque result of an exact projection.
 */
typedef struct CpProjection CpProjection;

/**
 * Residuals of the optimality system, max-norm.
 */
typedef struct CpKktReport {
  double stationarity;
  double primal_lower;
  double primal_upper;
  double sum;
  double dual;
  double complementarity;
  bool passed;
} CpKktReport;

/**
 * Settings for the iterative solvers. Zero fields take the library defaults.
 */
typedef struct CpSolverConfig {
  double tol;
  size_t max_iters;
  double rho;
} CpSolverConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code. Never NULL; do not free.
 */
const char *cp_status_message(enum CpStatus status);

/**
 * Projects `y[0..len]` onto `{x : sum(x) = s, 0 <= x <= cap}`.
 * `eps <= 0` selects the default comparison tolerance. On success `*out`
 * owns a new handle.
 *
 * # Safety
 * `y` must point to `len` readable doubles and `out` to a writable pointer.
 */
enum CpStatus cp_project(const double *y,
                         size_t len,
                         double s,
                         double cap,
                         double eps,
                         struct CpProjection **out);

/**
 * Releases a handle from [`cp_project`]. NULL is ignored.
 *
 * # Safety
 * `handle` must be NULL or a live handle not freed before.
 */
void cp_projection_free(struct CpProjection *handle);

/**
 * Dimension of the projected vector, 0 for NULL.
 *
 * # Safety
 * `handle` must be NULL or a live handle.
 */
size_t cp_projection_len(const struct CpProjection *handle);

/**
 * Copies the solution into `out[0..len]`; `len` must be at least the
 * dimension.
 *
 * # Safety
 * `handle` must be a live handle and `out` must point to `len` writable
 * doubles.
 */
enum CpStatus cp_projection_copy_x(const struct CpProjection *handle, double *out, size_t len);

/**
 * Multiplier of the sum constraint.
 *
 * # Safety
 * `handle` must be a live handle and `gamma` writable.
 */
enum CpStatus cp_projection_gamma(const struct CpProjection *handle, double *gamma);

/**
 * Number of zeros `a` and the end `b` of the interior run; `D - b`
 * coordinates sit at the cap.
 *
 * # Safety
 * `handle` must be a live handle; `a` and `b` writable.
 */
enum CpStatus cp_projection_partition(const struct CpProjection *handle, size_t *a, size_t *b);

/**
 * True when the solver had to fall back to the least-violating partition.
 *
 * # Safety
 * `handle` must be NULL or a live handle.
 */
bool cp_projection_fallback(const struct CpProjection *handle);

/**
 * Certifies candidate `x` as the projection of `y` and fills `report`.
 *
 * # Safety
 * `y` and `x` must point to `len` readable doubles; `report` writable.
 */
enum CpStatus cp_verify(const double *y,
                        const double *x,
                        size_t len,
                        double s,
                        double cap,
                        double tol,
                        struct CpKktReport *report);

/**
 * Projection onto `{x >= 0, sum(x) = s}` written to `out[0..len]`.
 *
 * # Safety
 * `y` readable and `out` writable for `len` doubles.
 */
enum CpStatus cp_project_simplex(const double *y, size_t len, double s, double *out);

/**
 * Brute-force unit-cap projection for `len <= 14`.
 *
 * # Safety
 * `y` readable and `out` writable for `len` doubles.
 */
enum CpStatus cp_enumerate_oracle(const double *y, size_t len, double s, double *out);

/**
 * Dykstra alternating projection. `cfg` and `iterations` may be NULL.
 * Returns `CP_STATUS_NOT_CONVERGED` (with the last iterate in `out`) when
 * the iteration budget runs out.
 *
 * # Safety
 * `y` readable and `out` writable for `len` doubles.
 */
enum CpStatus cp_dykstra(const double *y,
                         size_t len,
                         double s,
                         double cap,
                         const struct CpSolverConfig *cfg,
                         double *out,
                         size_t *iterations);

/**
 * ADMM with a fixed penalty. Same conventions as [`cp_dykstra`].
 *
 * # Safety
 * `y` readable and `out` writable for `len` doubles.
 */
enum CpStatus cp_admm(const double *y,
                      size_t len,
                      double s,
                      double cap,
                      const struct CpSolverConfig *cfg,
                      double *out,
                      size_t *iterations);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CAPPED_PROJ_H */
