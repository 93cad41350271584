#ifndef TRAJGREEN_H
#define TRAJGREEN_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TgStatus {
  TG_STATUS_OK = 0,
  TG_STATUS_NULL_POINTER = 1,
  TG_STATUS_INVALID_ARGUMENT = 2,
  TG_STATUS_OUT_OF_RANGE = 3,
  TG_STATUS_SINGULAR_DIVISION = 4,
  TG_STATUS_DIVERGENT_INPUT = 5,
  TG_STATUS_MEAN_NOT_SUBTRACTED = 6,
  TG_STATUS_CANCELLATION_FAILURE = 7,
  TG_STATUS_QUADRATURE = 8,
  TG_STATUS_BISECTION = 9,
  TG_STATUS_INTERNAL = 10,
} TgStatus;

/**
 * The family of the 1D perturbation `U`.
 */
typedef enum TgPotential {
  /**
   * `U = x^{2p}`
   */
  TG_POTENTIAL_EVEN_POWER = 0,
  /**
   * `U = x^{2p+1}`
   */
  TG_POTENTIAL_ODD_POWER = 1,
} TgPotential;

typedef enum TgEngine {
  TG_ENGINE_REVISED = 0,
  TG_ENGINE_OLD = 1,
} TgEngine;

/**
 * Opaque run result.
 */
typedef struct TgReport TgReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Iterate `H = -½d²/dx² + ½g²x² + εU` with `U = x^{2p}` or `x^{2p+1}`,
 * keeping orders up to `order` in ε.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum TgStatus tg_solve1d(enum TgPotential potential,
                         uint32_t p,
                         uint32_t order,
                         uint32_t max_iter,
                         enum TgEngine engine_kind,
                         struct TgReport **out);

/**
 * Iterate the hydrogen ground state in a field `εr cosθ`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum TgStatus tg_stark(uint32_t order,
                       uint32_t max_iter,
                       enum TgEngine engine_kind,
                       struct TgReport **out);

/**
 * Number of iteration steps recorded; 0 for a null handle.
 *
 * # Safety
 * `report` must be null or a handle from this library.
 */
size_t tg_report_steps(const struct TgReport *report);

/**
 * Whether the run ended on `state_n == state_{n-1}`.
 *
 * # Safety
 * `report` must be null or a handle from this library; `out` must be valid.
 */
enum TgStatus tg_report_fixed_point(const struct TgReport *report, bool *out);

/**
 * `Δ` after step `step` (1-based) evaluated at numeric `ε` and `g`.
 *
 * # Safety
 * `report` must be null or a handle from this library; `out` must be valid.
 */
enum TgStatus tg_report_delta_eval(const struct TgReport *report,
                                   size_t step,
                                   double eps,
                                   double g,
                                   double *out);

/**
 * Exact `Δ` after step `step` as text, e.g. `ε^2·(-11/8·g^-4) + O(ε^3)`.
 * Returns null on error. Free with `tg_string_free`.
 *
 * # Safety
 * `report` must be null or a handle from this library.
 */
char *tg_report_delta_string(const struct TgReport *report, size_t step);

/**
 * The full result document as JSON (schema version 1). Free with
 * `tg_string_free`.
 *
 * # Safety
 * `report` must be null or a handle from this library.
 */
char *tg_report_json(const struct TgReport *report);

/**
 * # Safety
 * `report` must be null or a handle from this library, not yet freed.
 */
void tg_report_free(struct TgReport *report);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void tg_string_free(char *s);

/**
 * Message for the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *tg_last_error(void);

/**
 * Lowest eigenvalue of `-½d²/dx² + V` on `[-half_width, half_width]` with
 * `V(x) = Σ coeffs[k] x^k`, on `points` grid points (odd, ≥ 3).
 *
 * # Safety
 * `coeffs` must point to `len` doubles (or be null with `len == 0`);
 * `out` must be valid.
 */
enum TgStatus tg_ground_energy_fd(const double *coeffs,
                                  size_t len,
                                  double half_width,
                                  size_t points,
                                  double *out);

/**
 * Numeric `D̄u` at `x` for `u(z) = Σ coeffs[k] z^k`, after subtracting
 * the Gaussian mean of `u`.
 *
 * # Safety
 * As for `tg_ground_energy_fd`.
 */
enum TgStatus tg_numeric_dbar_1d(const double *coeffs, size_t len, double x, double g, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRAJGREEN_H */
