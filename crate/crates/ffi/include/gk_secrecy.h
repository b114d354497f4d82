#ifndef GK_SECRECY_H
#define GK_SECRECY_H

/* Generated with cbindgen:0.29.4 */

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum GkStatus {
  GK_STATUS_OK = 0,
  GK_STATUS_NULL_POINTER = 1,
  GK_STATUS_INVALID_PARAMETER = 2,
  GK_STATUS_DOMAIN = 3,
  /**
   * The requested formula does not apply to these shapes.
   */
  GK_STATUS_REGIME = 4,
  GK_STATUS_UNSUPPORTED_SHAPE = 5,
  GK_STATUS_NON_CONVERGENCE = 6,
  GK_STATUS_OVERFLOW = 7,
  GK_STATUS_UNDERFLOW = 8,
  /**
   * A Rust panic was caught at the boundary.
   */
  GK_STATUS_INTERNAL = 9,
} GkStatus;

/**
 * Method that produced an estimate.
 */
typedef enum GkMethod {
  GK_METHOD_APPROX = 0,
  GK_METHOD_RAYLEIGH = 1,
  GK_METHOD_NAKAGAMI = 2,
  GK_METHOD_EXACT = 3,
  GK_METHOD_ASYMPTOTIC_DISTINCT = 4,
  GK_METHOD_ASYMPTOTIC_EQUAL = 5,
  GK_METHOD_ASYMPTOTIC_K1M1 = 6,
  GK_METHOD_MONTE_CARLO = 7,
} GkMethod;

/**
 * Opaque secrecy scenario: main link, eavesdropper link and target rate.
 */
typedef struct GkScenario GkScenario;

/**
 * Analytic SOP estimate.
 */
typedef struct GkEstimate {
  /**
   * Probability clamped to [0, 1].
   */
  double value;
  /**
   * Value before clamping.
   */
  double raw_value;
  /**
   * Variance of the eavesdropper SNR.
   */
  double sigma_e_sq;
  enum GkMethod method;
  /**
   * Non-zero when the estimate is outside its validity range.
   */
  int32_t validity_warning;
} GkEstimate;

/**
 * Monte-Carlo SOP estimate.
 */
typedef struct GkMcResult {
  double estimate;
  double std_error;
  uint64_t samples;
  uint64_t seed;
  double mean_gamma_d;
  double mean_gamma_e;
} GkMcResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a scenario. Mean SNRs are linear (not dB); `rs` is in bits/s/Hz.
 *
 * # Safety
 * `out` must be NULL or valid for writing one pointer. The handle written
 * there must be released with [`gk_scenario_free`].
 */
enum GkStatus gk_scenario_new(double kd,
                              double md,
                              double snr_d,
                              double ke,
                              double me,
                              double snr_e,
                              double rs,
                              struct GkScenario **out);

/**
 * Releases a scenario. NULL is accepted.
 *
 * # Safety
 * `s` must be NULL or a handle from [`gk_scenario_new`] not yet freed.
 */
void gk_scenario_free(struct GkScenario *s);

/**
 * Closed-form second-order approximation (Rayleigh/Nakagami forms when both links reduce).
 *
 * # Safety
 * `s` must be a live handle and `out` valid for one write.
 */
enum GkStatus gk_sop_approx(const struct GkScenario *s, struct GkEstimate *out);

/**
 * SOP by adaptive quadrature.
 *
 * # Safety
 * `s` must be a live handle and `out` valid for one write.
 */
enum GkStatus gk_sop_exact(const struct GkScenario *s, struct GkEstimate *out);

/**
 * High-SNR asymptote for the main-link shapes of the scenario.
 *
 * # Safety
 * `s` must be a live handle and `out` valid for one write.
 */
enum GkStatus gk_sop_asymptotic(const struct GkScenario *s, struct GkEstimate *out);

/**
 * Monte-Carlo estimate; `workers = 0` uses all available cores.
 * Results depend only on `samples` and `seed`.
 *
 * # Safety
 * `s` must be a live handle and `out` valid for one write.
 */
enum GkStatus gk_sop_mc(const struct GkScenario *s,
                        uint64_t samples,
                        uint64_t seed,
                        uint32_t workers,
                        struct GkMcResult *out);

/**
 * CDF of a generalized-K SNR with shapes `k`, `m` and linear mean `mean_snr`.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum GkStatus gk_cdf(double k, double m, double mean_snr, double gamma, double *out);

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *gk_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *gk_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GK_SECRECY_H */
