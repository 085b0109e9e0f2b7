#ifndef QDEPHASE_H
#define QDEPHASE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum QdStatus {
  QD_STATUS_OK = 0,
  QD_STATUS_NULL_POINTER = 1,
  /**
   * A parameter is outside the domain of the operation.
   */
  QD_STATUS_DOMAIN = 2,
  QD_STATUS_DIMENSION = 3,
  QD_STATUS_POLE = 4,
  /**
   * The caller's output buffer is too short.
   */
  QD_STATUS_BUFFER_TOO_SMALL = 5,
  /**
   * An internal panic was caught at the boundary.
   */
  QD_STATUS_PANIC = 6,
} QdStatus;

/**
 * Opaque noise parameters.
 */
typedef struct QdNoiseSpec QdNoiseSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread (empty if none). The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *qd_last_error(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *qd_version(void);

/**
 * Creates a noise spec. `p = 0` is white noise.
 */
enum QdStatus qd_noise_spec_new(double alpha,
                                double omega0,
                                double omega_j,
                                double p,
                                struct QdNoiseSpec **out);

/**
 * Releases a spec; null is ignored.
 */
void qd_noise_spec_free(struct QdNoiseSpec *spec);

/**
 * Number of harmonic modes `J`, or 0 for a null handle.
 */
size_t qd_noise_spec_mode_count(const struct QdNoiseSpec *spec);

/**
 * `Γ(t)`.
 */
enum QdStatus qd_gamma(const struct QdNoiseSpec *spec, double t, double *out);

/**
 * `dΓ/dt`.
 */
enum QdStatus qd_gamma_dot(const struct QdNoiseSpec *spec, double t, double *out);

/**
 * `Γ` on `n_points` uniform samples of `[0, t_max]`.
 */
enum QdStatus qd_gamma_on_grid(const struct QdNoiseSpec *spec,
                               double t_max,
                               size_t n_points,
                               double *out,
                               size_t out_len);

/**
 * σz-basis coherence `exp(−2Γ(t))`.
 */
enum QdStatus qd_coherence_z(const struct QdNoiseSpec *spec, double t, double *out);

/**
 * σx/σy-basis coherence `|cos(ωk t)| exp(−2Γ(t))`.
 */
enum QdStatus qd_coherence_xy(const struct QdNoiseSpec *spec,
                              double omega_k,
                              double t,
                              double *out);

/**
 * BLP measure on `[0, t_max]`. `onset` receives the first time `Γ̇ < 0`,
 * or NaN for a Markovian window; it may be null.
 */
enum QdStatus qd_blp_measure(const struct QdNoiseSpec *spec,
                             double t_max,
                             size_t n_points,
                             double *measure,
                             double *onset);

/**
 * `ω0^c = 1.57 / (0.4996 t_max)`.
 */
enum QdStatus qd_critical_omega0(double t_max, double *out);

/**
 * `ωk^c = π / (2 t_max)`.
 */
enum QdStatus qd_critical_zeeman(double t_max, double *out);

/**
 * `ωk^r = π ω0 / 6.285`.
 */
enum QdStatus qd_resonant_zeeman(double omega0, double *out);

/**
 * σz-basis revival times in `[0, t_max]`. `count` receives the number of
 * times; `full` is set to 1 for complete revivals and 0 otherwise.
 */
enum QdStatus qd_predict_z_revivals(double omega0,
                                    double t_max,
                                    double *times,
                                    size_t capacity,
                                    size_t *count,
                                    int *full);

/**
 * Monte Carlo l1 coherence of the canonical input for `basis`
 * (0 = σz, 1 = σx, 2 = σy) on `n_points` samples of `[0, t_max]`.
 */
enum QdStatus qd_ensemble_coherence(const struct QdNoiseSpec *spec,
                                    double omega_k,
                                    int basis,
                                    double t_max,
                                    size_t n_points,
                                    size_t members,
                                    uint64_t seed,
                                    double *out,
                                    size_t out_len);

/**
 * GRAPE for a one-qubit target given row-major as separate real and
 * imaginary parts. Controls are `σx, σy` amplitudes bounded by `bound`,
 * written as `segments × 2` row-major into `controls`.
 */
enum QdStatus qd_grape_1q(const double *target_re,
                          const double *target_im,
                          size_t segments,
                          double dt,
                          double bound,
                          size_t max_iter,
                          double target_fidelity,
                          uint64_t seed,
                          double *controls,
                          size_t controls_len,
                          double *fidelity,
                          size_t *iterations);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QDEPHASE_H */
