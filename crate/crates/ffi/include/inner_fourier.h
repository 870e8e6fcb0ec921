#ifndef INNER_FOURIER_H
#define INNER_FOURIER_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result of every fallible call.
 */
typedef enum IfStatus {
  IF_STATUS_OK = 0,
  IF_STATUS_NULL_POINTER = 1,
  IF_STATUS_PRECONDITION = 2,
  IF_STATUS_DOMAIN = 3,
  IF_STATUS_EVALUATION = 4,
  IF_STATUS_POLE = 5,
  IF_STATUS_NON_REAL_MEAN = 6,
  IF_STATUS_PARSE = 7,
  IF_STATUS_IO = 8,
  IF_STATUS_BUFFER_TOO_SMALL = 9,
  IF_STATUS_INVALID_UTF8 = 10,
  IF_STATUS_PANIC = 11,
} IfStatus;

/*
 Real Fourier coefficients.
 */
typedef struct IfFourier IfFourier;

/*
 An inner analytic function.
 */
typedef struct IfInner IfInner;

/*
 Complex Taylor coefficients.
 */
typedef struct IfTaylor IfTaylor;

/*
 Cauchy-integral partial sum at one point.
 */
typedef struct IfPartialSum {
  double direct_re;
  double direct_im;
  double contour_re;
  double contour_im;
  double discrepancy;
} IfPartialSum;

/*
 Growth classification of a magnitude sequence.
 */
typedef struct IfClassification {
  bool bounded;
  double fitted_rate;
  double fitted_power;
  size_t window_lo;
  size_t window_hi;
  bool sparsity_flag;
  bool degenerate;
} IfClassification;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or NULL. The pointer
 stays valid until the next failing call on the same thread.
 */
const char *if_last_error(void);

/*
 Library version as a static string.
 */
const char *if_version(void);

/*
 Builds coefficients from `alpha0`, `alpha[0..k]` and `beta[0..k]`.

 # Safety
 `alpha` and `beta` must point to `k` doubles (or be NULL when `k == 0`);
 `out` must be writable.
 */
enum IfStatus if_fourier_new(double alpha0,
                             const double *alpha,
                             const double *beta,
                             size_t k,
                             struct IfFourier **out);

/*
 Coefficients of a catalog entry. NaN floats and zero integers select the
 entry defaults. Distributions always use their closed form; other
 entries use `points`-point quadrature unless `exact` is set.

 # Safety
 `id` must be a NUL-terminated string; `out` must be writable.
 */
enum IfStatus if_fourier_from_catalog(const char *id,
                                      size_t k,
                                      size_t points,
                                      bool exact,
                                      uint32_t harmonic,
                                      double c,
                                      double r,
                                      double theta1,
                                      uint32_t order,
                                      struct IfFourier **out);

/*
 Coefficients of samples on the uniform grid `theta_m = (2m - M) pi / M`.

 # Safety
 `values` must point to `len` doubles; `out` must be writable.
 */
enum IfStatus if_fourier_from_samples(const double *values,
                                      size_t len,
                                      size_t k,
                                      struct IfFourier **out);

/*
 Coefficients of the delta (`order == 0`) or its `order`-th derivative.

 # Safety
 `out` must be writable.
 */
enum IfStatus if_delta_coefficients(double theta1,
                                    uint32_t order,
                                    size_t k,
                                    struct IfFourier **out);

/*
 Truncation order `K`, or 0 for NULL.

 # Safety
 `fc` must be NULL or a live handle.
 */
size_t if_fourier_order(const struct IfFourier *fc);

/*
 Copies `alpha0` and the `K` cosine and sine coefficients out.

 # Safety
 `alpha` and `beta` must have room for `cap` doubles.
 */
enum IfStatus if_fourier_get(const struct IfFourier *fc,
                             double *alpha0,
                             double *alpha,
                             double *beta,
                             size_t cap);

/*
 # Safety
 `fc` must be NULL or a handle not yet freed.
 */
void if_fourier_free(struct IfFourier *fc);

/*
 # Safety
 `re` and `im` must point to `len >= 1` doubles; `out` must be writable.
 */
enum IfStatus if_taylor_new(const double *re, const double *im, size_t len, struct IfTaylor **out);

/*
 # Safety
 `tc` must be NULL or a live handle.
 */
size_t if_taylor_order(const struct IfTaylor *tc);

/*
 Copies the `K + 1` coefficients out.

 # Safety
 `re` and `im` must have room for `cap` doubles.
 */
enum IfStatus if_taylor_get(const struct IfTaylor *tc, double *re, double *im, size_t cap);

/*
 # Safety
 `tc` must be NULL or a handle not yet freed.
 */
void if_taylor_free(struct IfTaylor *tc);

/*
 `c_0 = alpha_0 / 2`, `c_k = alpha_k - i beta_k`.

 # Safety
 `fc` must be a live handle; `out` must be writable.
 */
enum IfStatus if_to_taylor(const struct IfFourier *fc, struct IfTaylor **out);

/*
 Inverse of [`if_to_taylor`]; fails with `NonRealMean` when `c_0` is not real.

 # Safety
 `tc` must be a live handle; `out` must be writable.
 */
enum IfStatus if_from_taylor(const struct IfTaylor *tc, struct IfFourier **out);

/*
 Regulated sum and its conjugate at `(rho, theta)`, `0 <= rho < 1`.

 # Safety
 `fc` must be a live handle; `value` and `conjugate` must be writable.
 */
enum IfStatus if_regulated_sum(const struct IfFourier *fc,
                               double theta,
                               double rho,
                               double *value,
                               double *conjugate);

/*
 Limit of the regulated sum along radii `1 - 2^-j`, `j = first..=last`.

 # Safety
 `fc` must be a live handle; `value` and `converged` must be writable.
 */
enum IfStatus if_rho_limit(const struct IfFourier *fc,
                           double theta,
                           uint32_t first,
                           uint32_t last,
                           double tol,
                           double *value,
                           bool *converged);

/*
 Closed-form Poisson kernel `(1 - rho^2) / (2 pi (1 + rho^2 - 2 rho cos(theta - theta1)))`.
 */
double if_poisson_kernel(double theta, double theta1, double rho);

/*
 # Safety
 `tc` must be a live handle; `out` must be writable.
 */
enum IfStatus if_inner_from_taylor(const struct IfTaylor *tc, struct IfInner **out);

/*
 The delta's inner function, with its pole at `e^{i theta1}`.

 # Safety
 `out` must be writable.
 */
enum IfStatus if_inner_delta(double theta1, struct IfInner **out);

/*
 # Safety
 `w` must be NULL or a handle not yet freed.
 */
void if_inner_free(struct IfInner *w);

/*
 `w(z)` for `z = re + i im`.

 # Safety
 `w` must be a live handle; `out_re` and `out_im` must be writable.
 */
enum IfStatus if_inner_eval(const struct IfInner *w,
                            double re,
                            double im,
                            double *out_re,
                            double *out_im);

/*
 Order-`n` partial sum at `z = rho e^{i theta}` directly and through the
 Cauchy integral on the circle of radius `rho1`.

 # Safety
 `w` must be a live handle; `out` must be writable.
 */
enum IfStatus if_contour_partial_sum(const struct IfInner *w,
                                     double rho,
                                     double theta,
                                     size_t n,
                                     double rho1,
                                     size_t points,
                                     struct IfPartialSum *out);

/*
 Disk scalar product on the circle of radius `rho0`.

 # Safety
 `w1` and `w2` must be live handles; `re` and `im` must be writable.
 */
enum IfStatus if_inner_product_disk(const struct IfInner *w1,
                                    const struct IfInner *w2,
                                    double rho0,
                                    size_t points,
                                    double *re,
                                    double *im);

/*
 Classifies `mags[0..len]` (index = k). `window_lo == window_hi == 0`
 selects the default window; `rate_tol <= 0` the default tolerance.

 # Safety
 `mags` must point to `len` doubles; `out` must be writable.
 */
enum IfStatus if_classify(const double *mags,
                          size_t len,
                          size_t window_lo,
                          size_t window_hi,
                          double rate_tol,
                          struct IfClassification *out);

/*
 Largest diagonal and off-diagonal errors of the Fourier Gram matrix.

 # Safety
 `diag_error` and `offdiag_error` must be writable.
 */
enum IfStatus if_fourier_gram_errors(size_t k,
                                     size_t points,
                                     double *diag_error,
                                     double *offdiag_error);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* INNER_FOURIER_H */
