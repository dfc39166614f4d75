#ifndef QGAUSS_H
#define QGAUSS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum QgStatus {
  QG_STATUS_OK = 0,
  // Null pointer or non-UTF-8 string argument.
  QG_STATUS_INVALID_ARGUMENT = 1,
  QG_STATUS_SYNTAX = 2,
  QG_STATUS_DOMAIN = 3,
  QG_STATUS_PRECISION = 4,
  QG_STATUS_RESOURCE = 5,
  QG_STATUS_TRUNCATION = 6,
  // A Rust panic was caught at the boundary.
  QG_STATUS_INTERNAL = 7,
} QgStatus;

// Working precision.
typedef struct QgContext QgContext;

// Normalised parameters `(x, theta, N)` plus the mapping back to the raw input.
typedef struct QgParams QgParams;

// Outcome of one evaluation.
typedef struct QgReport QgReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer stays
// valid until the next failing call on the same thread.
const char *qg_last_error_message(void);

// Creates a context with `digits` significant decimal digits (15 to 500).
//
// # Safety
// `out` must be a valid pointer.
enum QgStatus qg_context_new(uint32_t digits, struct QgContext **out);

// # Safety
// `ctx` must come from [`qg_context_new`] and not be freed twice. Null is ignored.
void qg_context_free(struct QgContext *ctx);

// # Safety
// `ctx` must be a live context or null (returns 0).
uint32_t qg_context_digits(const struct QgContext *ctx);

// # Safety
// `ctx` must be a live context or null (returns NaN).
double qg_context_eps(const struct QgContext *ctx);

// Parses `x` and `theta` as number expressions (`1/(250*sqrt(pi))`, `-0.125`)
// at the precision of `ctx` and reduces them to `0 < x < 1`, `|theta| <= 1/2`.
//
// # Safety
// `ctx`, `x`, `theta` must be valid; the strings NUL-terminated UTF-8.
enum QgStatus qg_params_new(const struct QgContext *ctx,
                            const char *x,
                            const char *theta,
                            uint64_t n,
                            struct QgParams **out);

// Same as [`qg_params_new`] with binary64 inputs taken as exact.
//
// # Safety
// `ctx` and `out` must be valid.
enum QgStatus qg_params_from_f64(const struct QgContext *ctx,
                                 double x,
                                 double theta,
                                 uint64_t n,
                                 struct QgParams **out);

// # Safety
// `p` must come from a params constructor and not be freed twice. Null is ignored.
void qg_params_free(struct QgParams *p);

// Direct summation. The report bound is NaN.
//
// # Safety
// All pointers must be valid.
enum QgStatus qg_direct_sum(const struct QgContext *ctx,
                            const struct QgParams *params,
                            struct QgReport **out);

// Exact erfc representation. `tol <= 0` selects the context epsilon. The
// report bound is the certified tail error; terms is 0.
//
// # Safety
// All pointers must be valid.
enum QgStatus qg_exact_sum(const struct QgContext *ctx,
                           const struct QgParams *params,
                           double tol,
                           struct QgReport **out);

// Asymptotic expansion with `n` series terms; `n = 0` selects the default.
//
// # Safety
// All pointers must be valid.
enum QgStatus qg_theorem1_eval(const struct QgContext *ctx,
                               const struct QgParams *params,
                               uint32_t n,
                               struct QgReport **out);

// # Safety
// `report` must be valid; `re` and `im` may each be null.
enum QgStatus qg_report_value(const struct QgReport *report, double *re, double *im);

// Writes the real (`imag = false`) or imaginary part in scientific notation
// with the context's digits into `buf`, truncating to `cap - 1` bytes.
// Returns the length needed including the terminating NUL, or 0 when
// `report` is null.
//
// # Safety
// `buf` must point to `cap` writable bytes, or be null with `cap = 0`.
size_t qg_report_value_string(const struct QgReport *report, bool imag, char *buf, size_t cap);

// Remainder bound of the report; NaN for direct sums.
//
// # Safety
// `report` must be a live report or null (returns NaN).
double qg_report_bound(const struct QgReport *report);

// Series terms used by an expansion report, else 0.
//
// # Safety
// `report` must be a live report or null.
uint32_t qg_report_terms(const struct QgReport *report);

// Optimal truncation index recorded by an expansion report, else 0.
//
// # Safety
// `report` must be a live report or null.
uint64_t qg_report_optimal_n(const struct QgReport *report);

// Whether the expansion ran at or past its optimal truncation.
//
// # Safety
// `report` must be a live report or null.
bool qg_report_divergent(const struct QgReport *report);

// # Safety
// `report` must come from an evaluation call and not be freed twice. Null is ignored.
void qg_report_free(struct QgReport *report);

// Remainder bound for `n` terms at `(x, eps, theta)`, independent of `N`.
//
// # Safety
// `ctx` and `out` must be valid.
enum QgStatus qg_remainder_bound(const struct QgContext *ctx,
                                 uint32_t n,
                                 double x,
                                 double eps,
                                 double theta,
                                 double *out);

// Index near which the series terms stop decreasing.
//
// # Safety
// `out` must be valid.
enum QgStatus qg_optimal_truncation(double x, double eps, uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QGAUSS_H */
