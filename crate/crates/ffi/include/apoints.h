#ifndef APOINTS_H
#define APOINTS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ApStatus {
  AP_STATUS_OK = 0,
  AP_STATUS_NULL_POINTER = 1,
  AP_STATUS_INVALID_ARGUMENT = 2,
  AP_STATUS_DOMAIN = 3,
  AP_STATUS_SCAN = 4,
  AP_STATUS_ENGINE = 5,
  AP_STATUS_OUT_OF_RANGE = 6,
  AP_STATUS_PANIC = 7,
} ApStatus;

typedef enum ApFormula {
  AP_FORMULA_FUJII_ZERO = 0,
  AP_FORMULA_FUJII_WEIGHTED = 1,
  AP_FORMULA_THEOREM1 = 2,
  AP_FORMULA_COROLLARY2 = 3,
  AP_FORMULA_THEOREM3 = 4,
  AP_FORMULA_COROLLARY_JM = 5,
  AP_FORMULA_NDERIV = 6,
} ApFormula;

// Sieve and evaluation settings shared by the formula calls.
typedef struct ApContext ApContext;

// a-points of one level, sorted by height.
typedef struct ApPointSet ApPointSet;

typedef struct ApComplex {
  double re;
  double im;
} ApComplex;

// ρ_a = beta + i·gamma with |ζ(ρ_a) − a| = residual.
typedef struct ApPoint {
  double beta;
  double gamma;
  double residual;
} ApPoint;

// Level a, weight X, shift α and window (τ, T].
typedef struct ApParams {
  struct ApComplex a;
  double x;
  double alpha;
  double tau;
  double t;
} ApParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message (NUL-terminated, possibly truncated) into
// `buf` and returns the full message length without the terminator.
//
// # Safety
// `buf` must be null or valid for `len` bytes.
size_t ap_last_error(char *buf, size_t len);

// n-th derivative of ζ at s.
//
// # Safety
// `result` must be a valid pointer.
enum ApStatus ap_zeta(struct ApComplex s, uint32_t n, struct ApComplex *result);

// Number of a-points with t_low < γ ≤ t_high.
//
// # Safety
// `count` must be a valid pointer.
enum ApStatus ap_count(struct ApComplex a, double t_low, double t_high, size_t *count);

// Locates the a-points with t_low < γ ≤ t_high.
//
// # Safety
// `set` must be a valid pointer; on success it receives a handle to be
// released with [`ap_point_set_free`].
enum ApStatus ap_locate(struct ApComplex a, double t_low, double t_high, struct ApPointSet **set);

// # Safety
// `set` must be null or a handle from [`ap_locate`] not yet freed.
void ap_point_set_free(struct ApPointSet *set);

// # Safety
// `set` must be a live handle; `len` a valid pointer.
enum ApStatus ap_point_set_len(const struct ApPointSet *set, size_t *len);

// Upper edge of the window actually scanned.
//
// # Safety
// `set` must be a live handle; `t` a valid pointer.
enum ApStatus ap_point_set_t_effective(const struct ApPointSet *set, double *t);

// # Safety
// `set` must be a live handle; `point` a valid pointer.
enum ApStatus ap_point_set_get(const struct ApPointSet *set, size_t index, struct ApPoint *point);

// Creates a context with a sieve up to `sieve_limit`.
//
// # Safety
// `ctx` must be a valid pointer; release the handle with [`ap_context_free`].
enum ApStatus ap_context_new(size_t sieve_limit, struct ApContext **ctx);

// # Safety
// `ctx` must be null or a handle from [`ap_context_new`] not yet freed.
void ap_context_free(struct ApContext *ctx);

// Σ ζ⁽ⁿ⁾(ρ_a + iδ) X^{ρ_a} over the points of `set` with τ < γ ≤ T.
//
// # Safety
// All pointers must be valid; `ctx` and `set` live handles.
enum ApStatus ap_lhs_sum(const struct ApContext *ctx,
                         const struct ApPointSet *set,
                         const struct ApParams *params,
                         uint32_t n,
                         struct ApComplex *result);

// Main term of formula `id`; `n` is used by `Nderiv` and `zero_sum` by
// `Theorem3` and `Nderiv`. `error_scale` may be null.
//
// # Safety
// `ctx`, `params` and `total` must be valid; `error_scale` valid or null.
enum ApStatus ap_formula(const struct ApContext *ctx,
                         enum ApFormula id,
                         const struct ApParams *params,
                         uint32_t n,
                         struct ApComplex zero_sum,
                         struct ApComplex *total,
                         double *error_scale);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* APOINTS_H */
