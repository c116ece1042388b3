#ifndef ESDKIT_H
#define ESDKIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EsdStatus {
  ESD_STATUS_OK = 0,
  ESD_STATUS_INVALID_INPUT = 1,
  ESD_STATUS_NUMERIC = 2,
  ESD_STATUS_NULL_POINTER = 3,
  ESD_STATUS_BUFFER_TOO_SMALL = 4,
  ESD_STATUS_PANIC = 5,
} EsdStatus;

/**
 * Opaque density matrix.
 */
typedef struct EsdDensityMatrix EsdDensityMatrix;

/**
 * Opaque pure state.
 */
typedef struct EsdPureState EsdPureState;

/**
 * Opaque single-atom bath propagator.
 */
typedef struct EsdWwPropagator EsdWwPropagator;

typedef struct EsdGeOptions {
  size_t restarts;
  size_t max_iterations;
  double tolerance;
  uint64_t seed;
} EsdGeOptions;

typedef struct EsdDiscordOptions {
  size_t grid;
  double tolerance;
  size_t max_iterations;
  size_t restarts;
  uint64_t seed;
} EsdDiscordOptions;

typedef struct EsdWwParams {
  size_t modes;
  double gamma;
  double half_bandwidth;
  double atom_frequency;
} EsdWwParams;

typedef struct EsdComplex {
  double re;
  double im;
} EsdComplex;

typedef struct EsdSigma {
  double q_aa;
  double q_pp;
  double c4;
  double sigma;
} EsdSigma;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *esd_version(void);

/**
 * Copies the calling thread's last error message into `buf` (truncated,
 * always NUL-terminated when `len > 0`). Returns the full length including
 * the terminator.
 */
size_t esd_last_error_message(char *buf, size_t len);

struct EsdGeOptions esd_ge_options_default(void);

struct EsdDiscordOptions esd_discord_options_default(void);

struct EsdWwParams esd_ww_params_default(void);

/**
 * Builds a normalized pure state. `labels` is a comma list or NULL for
 * `q0, q1, ...`.
 */
enum EsdStatus esd_pure_state_new(const size_t *dims,
                                  size_t n_dims,
                                  const char *labels,
                                  const struct EsdComplex *amps,
                                  size_t n_amps,
                                  struct EsdPureState **out_state);

/**
 * Cavity-model state at dimensionless time `jt`, layout `A1 P1 A2 P2`.
 */
enum EsdStatus esd_jc_state(double theta, double jt, struct EsdPureState **out_state);

enum EsdStatus esd_pair_state(double theta,
                              struct EsdComplex xi,
                              struct EsdComplex chi,
                              struct EsdPureState **out_state);

void esd_pure_state_free(struct EsdPureState *state);

/**
 * Hilbert-space dimension, 0 for NULL.
 */
size_t esd_pure_state_dim(const struct EsdPureState *state);

enum EsdStatus esd_pure_state_amplitudes(const struct EsdPureState *state,
                                         struct EsdComplex *buf,
                                         size_t len);

/**
 * Density matrix from row-major entries; validated.
 */
enum EsdStatus esd_density_new(const size_t *dims,
                               size_t n_dims,
                               const char *labels,
                               const struct EsdComplex *entries,
                               size_t n_entries,
                               struct EsdDensityMatrix **out_rho);

enum EsdStatus esd_reduced_state(const struct EsdPureState *state,
                                 const size_t *keep,
                                 size_t n_keep,
                                 struct EsdDensityMatrix **out_rho);

void esd_density_free(struct EsdDensityMatrix *rho);

size_t esd_density_dim(const struct EsdDensityMatrix *rho);

/**
 * Row-major copy of the matrix.
 */
enum EsdStatus esd_density_entries(const struct EsdDensityMatrix *rho,
                                   struct EsdComplex *buf,
                                   size_t len);

enum EsdStatus esd_von_neumann_entropy(const struct EsdDensityMatrix *rho, double *out_value);

enum EsdStatus esd_concurrence_pure(const struct EsdPureState *state, double *out_value);

enum EsdStatus esd_n_concurrence(const struct EsdPureState *state, double *out_value);

enum EsdStatus esd_concurrence_mixed(const struct EsdDensityMatrix *rho, double *out_value);

/**
 * Wootters `Q`, which may be negative.
 */
enum EsdStatus esd_q_auxiliary(const struct EsdDensityMatrix *rho, double *out_value);

/**
 * Two-qubit discord; `opts` may be NULL for defaults.
 */
enum EsdStatus esd_discord_two_qubit(const struct EsdDensityMatrix *rho,
                                     const struct EsdDiscordOptions *opts,
                                     double *out_value);

/**
 * Discord of a pure state across a two-block cut such as `"A1P1|A2P2"`.
 */
enum EsdStatus esd_discord_pure(const struct EsdPureState *state,
                                const char *partition,
                                double *out_value);

enum EsdStatus esd_sigma(const struct EsdPureState *state, struct EsdSigma *out_sigma);

/**
 * Geometric entanglement for a fixed partition; `opts` may be NULL.
 */
enum EsdStatus esd_relative_ge(const struct EsdPureState *state,
                               const char *partition,
                               const struct EsdGeOptions *opts,
                               double *out_value);

/**
 * Geometric entanglement maximized over partitions with `k` blocks.
 */
enum EsdStatus esd_absolute_ge(const struct EsdPureState *state,
                               size_t k,
                               const struct EsdGeOptions *opts,
                               double *out_value);

enum EsdStatus esd_ww_propagator_new(const struct EsdWwParams *params,
                                     struct EsdWwPropagator **out_prop);

void esd_ww_propagator_free(struct EsdWwPropagator *prop);

/**
 * Excited-state amplitude `ξ(t)`.
 */
enum EsdStatus esd_ww_xi(const struct EsdWwPropagator *prop, double t, struct EsdComplex *out_xi);

/**
 * Closed-form death time; `+inf` when the state never dies.
 */
enum EsdStatus esd_death_time(double theta, double gamma, double *out_time);

/**
 * Closed-form birth time; `+inf` when photons never become entangled.
 */
enum EsdStatus esd_birth_time(double theta, double gamma, double *out_time);

enum EsdStatus esd_death_time_numeric(double theta,
                                      const struct EsdWwPropagator *prop,
                                      double gamma,
                                      double *out_time);

enum EsdStatus esd_birth_time_numeric(double theta,
                                      const struct EsdWwPropagator *prop,
                                      double gamma,
                                      double *out_time);

/**
 * Lorentzian line of half-width `gamma` centred on `e`.
 */
enum EsdStatus esd_spectrum(double nu, double gamma, double e, double *out_value);

enum EsdStatus esd_detection_probability(double delta_nu, double gamma, double *out_value);

enum EsdStatus esd_bandwidth_threshold(double theta, double *out_value);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ESDKIT_H */
