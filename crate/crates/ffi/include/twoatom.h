#ifndef TWOATOM_H
#define TWOATOM_H

/* Generated by cbindgen. Do not edit. */

#include <stddef.h>
#include <stdint.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum TwoatomStatus {
  TWOATOM_STATUS_OK = 0,
  TWOATOM_STATUS_NULL_POINTER = 1,
  TWOATOM_STATUS_INVARIANT = 2,
  TWOATOM_STATUS_DOMAIN = 3,
  TWOATOM_STATUS_INVALID_STATE = 4,
  TWOATOM_STATUS_INTEGRATION = 5,
  TWOATOM_STATUS_NUMERICAL = 6,
  TWOATOM_STATUS_UNDEFINED = 7,
  TWOATOM_STATUS_CONFIG = 8,
  TWOATOM_STATUS_PARTIAL = 9,
  TWOATOM_STATUS_INVALID_UTF8 = 10,
  TWOATOM_STATUS_OUT_OF_RANGE = 11,
  TWOATOM_STATUS_PANIC = 12,
} TwoatomStatus;

/**
 * Opaque driving field.
 */
typedef struct TwoatomDrive TwoatomDrive;

/**
 * Opaque Liouvillian generator.
 */
typedef struct TwoatomGenerator TwoatomGenerator;

/**
 * Opaque atom-pair configuration.
 */
typedef struct TwoatomPair TwoatomPair;

/**
 * Opaque 4×4 density matrix.
 */
typedef struct TwoatomState TwoatomState;

/**
 * Opaque result table from a scenario run.
 */
typedef struct TwoatomTable TwoatomTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy the last error message of this thread into `buf` (NUL-terminated, truncated to `len`).
 * Returns the full message length excluding the terminator.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
uintptr_t twoatom_last_error(char *buf, uintptr_t len);

/**
 * Identical atoms (Γ₁ = Γ₂ = 1) at `separation` wavelengths; `dipole_angle` between μ̂ and r̂₁₂.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum TwoatomStatus twoatom_pair_new(double separation,
                                    double dipole_angle,
                                    struct TwoatomPair **out);

/**
 * Pair with explicit (Γ₁₂, Ω₁₂), rates Γ₁, Γ₂ and detuning Δ.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum TwoatomStatus twoatom_pair_new_explicit(double gamma1,
                                             double gamma2,
                                             double delta,
                                             double gamma12,
                                             double omega12,
                                             struct TwoatomPair **out);

/**
 * Collective damping Γ₁₂ and dipole-dipole shift Ω₁₂ of a pair.
 *
 * # Safety
 * All pointers must be valid.
 */
enum TwoatomStatus twoatom_pair_couplings(const struct TwoatomPair *pair,
                                          double *gamma12,
                                          double *omega12);

/**
 * # Safety
 * `pair` must come from a `twoatom_pair_new*` call or be null.
 */
void twoatom_pair_free(struct TwoatomPair *pair);

/**
 * Laser drive. `standing` nonzero selects a standing wave.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum TwoatomStatus twoatom_drive_new(double rabi,
                                     double detuning,
                                     double propagation_angle,
                                     int32_t standing,
                                     double phase,
                                     struct TwoatomDrive **out);

/**
 * # Safety
 * `drive` must come from `twoatom_drive_new` or be null.
 */
void twoatom_drive_free(struct TwoatomDrive *drive);

/**
 * Generator of the driven pair in the vacuum.
 *
 * # Safety
 * All pointers must be valid.
 */
enum TwoatomStatus twoatom_generator_vacuum(const struct TwoatomPair *pair,
                                            const struct TwoatomDrive *drive,
                                            struct TwoatomGenerator **out);

/**
 * # Safety
 * `gen` must come from a generator constructor or be null.
 */
void twoatom_generator_free(struct TwoatomGenerator *gen);

/**
 * Steady state of a generator.
 *
 * # Safety
 * All pointers must be valid.
 */
enum TwoatomStatus twoatom_steady_state(const struct TwoatomGenerator *gen,
                                        struct TwoatomState **out);

/**
 * Element ρ_ij in the product basis (0 = gg, 1 = eg, 2 = ge, 3 = ee).
 *
 * # Safety
 * All pointers must be valid.
 */
enum TwoatomStatus twoatom_state_element(const struct TwoatomState *state,
                                         uintptr_t i,
                                         uintptr_t j,
                                         double *re,
                                         double *im);

/**
 * Collective populations (ρ_gg, ρ_ss, ρ_aa, ρ_ee) into `out[4]`.
 *
 * # Safety
 * `out` must point to 4 writable doubles.
 */
enum TwoatomStatus twoatom_state_collective_populations(const struct TwoatomState *state,
                                                        double *out);

/**
 * # Safety
 * `state` must come from a state producer or be null.
 */
void twoatom_state_free(struct TwoatomState *state);

/**
 * Total photon emission rate of `state`.
 *
 * # Safety
 * All pointers must be valid.
 */
enum TwoatomStatus twoatom_total_intensity(const struct TwoatomState *state,
                                           const struct TwoatomPair *pair,
                                           double *out);

/**
 * First-order interference visibility of `state`.
 *
 * # Safety
 * All pointers must be valid.
 */
enum TwoatomStatus twoatom_visibility(const struct TwoatomState *state, double *out);

/**
 * Normalized g²(τ) for a single detector at angle `theta` to the axis, perpendicular to the dipoles.
 *
 * # Safety
 * `tau` and `out` must point to `n` doubles; other pointers must be valid.
 */
enum TwoatomStatus twoatom_g2_tau(const struct TwoatomGenerator *gen,
                                  const struct TwoatomState *state,
                                  const struct TwoatomPair *pair,
                                  double theta,
                                  const double *tau,
                                  uintptr_t n,
                                  double *out);

/**
 * Quantum-jump ensemble from the ground state. Writes mean product-basis populations,
 * `n_grid × 4` row-major, into `populations`.
 *
 * # Safety
 * `grid` must point to `n_grid` doubles and `populations` to `4 n_grid`.
 */
enum TwoatomStatus twoatom_run_trajectories(const struct TwoatomPair *pair,
                                            const struct TwoatomDrive *drive,
                                            uintptr_t n_traj,
                                            uint64_t seed,
                                            const double *grid,
                                            uintptr_t n_grid,
                                            double *populations);

/**
 * Parse and run a scenario config given as NUL-terminated UTF-8 text.
 *
 * # Safety
 * `config` must be a valid C string and `out` a valid pointer.
 */
enum TwoatomStatus twoatom_run_config(const char *config, struct TwoatomTable **out);

/**
 * Table dimensions.
 *
 * # Safety
 * All pointers must be valid.
 */
enum TwoatomStatus twoatom_table_shape(const struct TwoatomTable *table,
                                       uintptr_t *rows,
                                       uintptr_t *cols);

/**
 * Cell value at (`row`, `col`).
 *
 * # Safety
 * All pointers must be valid.
 */
enum TwoatomStatus twoatom_table_get(const struct TwoatomTable *table,
                                     uintptr_t row,
                                     uintptr_t col,
                                     double *out);

/**
 * Write the table as CSV into `buf` (NUL-terminated, truncated to `len`); `needed` receives
 * the full length excluding the terminator.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes; `needed` must be valid.
 */
enum TwoatomStatus twoatom_table_csv(const struct TwoatomTable *table,
                                     char *buf,
                                     uintptr_t len,
                                     uintptr_t *needed);

/**
 * # Safety
 * `table` must come from `twoatom_run_config` or be null.
 */
void twoatom_table_free(struct TwoatomTable *table);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TWOATOM_H */
