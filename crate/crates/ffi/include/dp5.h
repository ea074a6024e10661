#ifndef DP5_H
#define DP5_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum Dp5Status {
  DP5_STATUS_OK = 0,
  DP5_STATUS_NULL_POINTER = 1,
  DP5_STATUS_INVALID_ARGUMENT = 2,
  DP5_STATUS_NAIVE_BOUND_EXCEEDED = 3,
  DP5_STATUS_NON_CONVERGENCE = 4,
  DP5_STATUS_VERIFICATION = 5,
  DP5_STATUS_POLE = 6,
  /**
   * The requested value was not computed for this report.
   */
  DP5_STATUS_UNAVAILABLE = 7,
  DP5_STATUS_PANIC = 8,
} Dp5Status;

/**
 * The leading constant with its factors and error bars.
 */
typedef struct Dp5Constant Dp5Constant;

/**
 * Counts from one or both engines at a single height bound.
 */
typedef struct Dp5CountReport Dp5CountReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *dp5_last_error(void);

/**
 * Number of points of height at most `b` on the complement of the lines,
 * via the universal torsor. `workers` = 0 uses every core.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum Dp5Status dp5_count_torsor(uint64_t b, uintptr_t workers, uint64_t *out);

/**
 * As [`dp5_count_torsor`], directly on the quadrics; `b` is limited.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum Dp5Status dp5_count_naive(uint64_t b, uintptr_t workers, uint64_t *out);

/**
 * Runs the selected engines at `b`, and the three-way split with parameter
 * `split_a` when it is positive.
 *
 * # Safety
 * `out` must be valid for writes. The handle written there is owned by the
 * caller and must be released with [`dp5_count_report_free`].
 */
enum Dp5Status dp5_count_report_new(uint64_t b,
                                    bool naive,
                                    bool torsor,
                                    double split_a,
                                    uintptr_t workers,
                                    struct Dp5CountReport **out);

/**
 * # Safety
 * `report` must come from [`dp5_count_report_new`] and not be freed yet, or
 * be null.
 */
void dp5_count_report_free(struct Dp5CountReport *report);

/**
 * # Safety
 * `report` must be a live handle; `out` valid for writes.
 */
enum Dp5Status dp5_count_report_naive(const struct Dp5CountReport *report, uint64_t *out);

/**
 * # Safety
 * `report` must be a live handle; `out` valid for writes.
 */
enum Dp5Status dp5_count_report_torsor(const struct Dp5CountReport *report, uint64_t *out);

/**
 * Writes `N_a`, `N_b1`, `N_b2` to `out[0..3]`.
 *
 * # Safety
 * `report` must be a live handle; `out` valid for three writes.
 */
enum Dp5Status dp5_count_report_split(const struct Dp5CountReport *report, uint64_t *out);

/**
 * Both engines agree, and the split sums to the total.
 *
 * # Safety
 * `report` must be a live handle; `out` valid for writes.
 */
enum Dp5Status dp5_count_report_consistent(const struct Dp5CountReport *report, bool *out);

/**
 * Whether the primitive point `coords` lies on the surface.
 *
 * # Safety
 * `coords` must point to 6 readable values; `out` valid for writes.
 */
enum Dp5Status dp5_is_on_surface(const int64_t *coords, bool *out);

/**
 * The image of the torsor point `(eta[0..6], alpha[0..2])`, as a primitive
 * integral vector with positive first coordinate.
 *
 * # Safety
 * `eta` must hold 6 values, `alpha` 2, and `out` room for 6.
 */
enum Dp5Status dp5_psi(const int64_t *eta, const int64_t *alpha, int64_t *out);

/**
 * The exact constant `α` as `num / den`.
 *
 * # Safety
 * Both pointers must be valid for writes.
 */
enum Dp5Status dp5_alpha(int64_t *num, int64_t *den);

/**
 * The Euler product over `p <= p_max`; the full product lies in
 * `[value - tail_bound, value]`.
 *
 * # Safety
 * Both pointers must be valid for writes.
 */
enum Dp5Status dp5_euler_product(uint64_t p_max, double *value, double *tail_bound);

/**
 * The archimedean density to relative tolerance `tol`.
 *
 * # Safety
 * Both pointers must be valid for writes.
 */
enum Dp5Status dp5_omega_infty(double tol, double *value, double *error);

/**
 * # Safety
 * `out` must be valid for writes; the handle must be released with
 * [`dp5_constant_free`].
 */
enum Dp5Status dp5_constant_new(double tol, uint64_t p_max, struct Dp5Constant **out);

/**
 * `c` and its propagated error.
 *
 * # Safety
 * `c` must be a live handle; pointers valid for writes.
 */
enum Dp5Status dp5_constant_value(const struct Dp5Constant *c, double *value, double *error);

/**
 * `ω∞` and its error estimate as used in `c`.
 *
 * # Safety
 * `c` must be a live handle; pointers valid for writes.
 */
enum Dp5Status dp5_constant_omega(const struct Dp5Constant *c, double *value, double *error);

/**
 * # Safety
 * `c` must come from [`dp5_constant_new`] and not be freed yet, or be null.
 */
void dp5_constant_free(struct Dp5Constant *c);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DP5_H */
