#ifndef NUINARCH_H
#define NUINARCH_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NuStatus {
  NU_STATUS_OK = 0,
  NU_STATUS_NULL_POINTER = 1,
  NU_STATUS_INVALID_ARGUMENT = 2,
  NU_STATUS_DATA_ERROR = 3,
  NU_STATUS_NUMERICAL_ERROR = 4,
  NU_STATUS_PANIC = 5,
} NuStatus;

// A sorted sample of the limit law with its provenance.
typedef struct NuLimitDist NuLimitDist;

// A count series `(X_0, ..., X_n)`.
typedef struct NuSeries NuSeries;

typedef struct NuUrtResult {
  double statistic;
  double critical_value;
  double p_value;
  double alpha_hat;
  size_t n;
  // 1 when the unit root is rejected, 0 otherwise.
  int reject;
} NuUrtResult;

typedef struct NuInterval {
  double lower;
  double upper;
} NuInterval;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. The pointer is
// valid until the next call into this library on the same thread.
const char *nu_last_error(void);

// Copy `len` counts into a new series.
//
// # Safety
// `values` must point to `len` readable values; `out_series` must be writable.
enum NuStatus nu_series_new(const uint64_t *values, size_t len, struct NuSeries **out_series);

// Simulate `(X_0 = kappa, X_1, ..., X_n)` on stream `(seed, stream)`.
//
// # Safety
// `out_series` must be writable.
enum NuStatus nu_series_simulate(double beta,
                                 double alpha,
                                 uint64_t kappa,
                                 size_t n,
                                 uint64_t seed,
                                 uint64_t stream,
                                 struct NuSeries **out_series);

// Number of values, including `X_0`. Zero for NULL.
//
// # Safety
// `series` must be NULL or a live handle.
size_t nu_series_len(const struct NuSeries *series);

// Copy the values into `buf`, which must hold at least
// `nu_series_len(series)` of them.
//
// # Safety
// `series` must be a live handle and `buf` must have room for `capacity` values.
enum NuStatus nu_series_values(const struct NuSeries *series, uint64_t *buf, size_t capacity);

// # Safety
// `series` must be NULL or a handle not yet freed.
void nu_series_free(struct NuSeries *series);

// Least-squares estimate of `alpha` with `beta` known.
//
// # Safety
// `series` must be a live handle; `alpha_hat` must be writable.
enum NuStatus nu_cls_alpha(const struct NuSeries *series, double beta, double *alpha_hat);

// Conditional maximum likelihood. With `joint` nonzero, maximizes over
// `beta > 0` and `alpha` in `[0, 1]`; otherwise over `beta` at `alpha_fixed`.
//
// # Safety
// `series` must be a live handle; the out-pointers must be writable.
enum NuStatus nu_cml_fit(const struct NuSeries *series,
                         int joint,
                         double alpha_fixed,
                         double *beta_hat,
                         double *alpha_hat,
                         double *loglik);

// Sample `draws` values of the limit law `D_gamma` with `steps` Euler steps.
//
// # Safety
// `out_dist` must be writable.
enum NuStatus nu_limit_sample(double beta,
                              double gamma,
                              size_t steps,
                              size_t draws,
                              uint64_t seed,
                              struct NuLimitDist **out_dist);

// # Safety
// `dist` must be NULL or a live handle.
size_t nu_limit_len(const struct NuLimitDist *dist);

// Quantile at `level` in `(0, 1)`, interpolating between order statistics.
//
// # Safety
// `dist` must be a live handle; `value` must be writable.
enum NuStatus nu_limit_quantile(const struct NuLimitDist *dist, double level, double *value);

// Distribution function at `x`, consistent with [`nu_limit_quantile`].
//
// # Safety
// `dist` must be a live handle; `value` must be writable.
enum NuStatus nu_limit_cdf(const struct NuLimitDist *dist, double x, double *value);

// Write a JSON critical-value table including the sample.
//
// # Safety
// `dist` must be a live handle; `path` a NUL-terminated UTF-8 string.
enum NuStatus nu_limit_write_table(const struct NuLimitDist *dist, const char *path);

// Load a table written with its sample. Fails with `InvalidArgument` when the
// table was built for a different `(beta, gamma)`.
//
// # Safety
// `path` must be a NUL-terminated UTF-8 string; `out_dist` must be writable.
enum NuStatus nu_limit_read_table(const char *path,
                                  double beta,
                                  double gamma,
                                  struct NuLimitDist **out_dist);

// # Safety
// `dist` must be NULL or a handle not yet freed.
void nu_limit_free(struct NuLimitDist *dist);

// Test `alpha = 1` against `alpha < 1` at level `zeta` using the `D_0`
// sample `d0`.
//
// # Safety
// `series` and `d0` must be live handles; `result` must be writable.
enum NuStatus nu_unit_root_test(const struct NuSeries *series,
                                double beta,
                                const struct NuLimitDist *d0,
                                double zeta,
                                struct NuUrtResult *result);

// Normal-approximation interval for `alpha` under stationarity.
//
// # Safety
// `series` must be a live handle; `interval` must be writable.
enum NuStatus nu_ci_stationary(const struct NuSeries *series,
                               double beta,
                               double level,
                               struct NuInterval *interval);

// Nearly unstable interval for `alpha`, sampling `D_gamma` at the plug-in
// `gamma` with `steps` Euler steps and `draws` draws.
//
// # Safety
// `series` must be a live handle; `interval` must be writable.
enum NuStatus nu_ci_nearly_unstable(const struct NuSeries *series,
                                    double beta,
                                    double level,
                                    size_t steps,
                                    size_t draws,
                                    uint64_t seed,
                                    struct NuInterval *interval);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NUINARCH_H */
