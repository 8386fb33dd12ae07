#ifndef TRIBODY_H
#define TRIBODY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TbStatus {
  TB_STATUS_OK = 0,
  TB_STATUS_NULL_POINTER = 1,
  TB_STATUS_INVALID_ARGUMENT = 2,
  TB_STATUS_COINCIDENT = 3,
  TB_STATUS_ZERO_KINETIC = 4,
  TB_STATUS_NO_TRAVERSAL = 5,
  TB_STATUS_IO = 6,
  TB_STATUS_PANIC = 7,
} TbStatus;

typedef enum TbCutoff {
  TB_CUTOFF_PAIR = 0,
  TB_CUTOFF_PRODUCT = 1,
} TbCutoff;

typedef enum TbTraversal {
  TB_TRAVERSAL_C01 = 0,
  TB_TRAVERSAL_C18 = 1,
  TB_TRAVERSAL_C08 = 2,
} TbTraversal;

/**
 * Opaque simulation handle.
 */
typedef struct TbSystem TbSystem;

/**
 * Reduced LJ units.
 */
typedef struct TbParams {
  double epsilon;
  double sigma;
  double mass;
  double nu;
  double r_c;
  double dt;
  double t_target;
  enum TbCutoff cutoff;
  enum TbTraversal traversal;
} TbParams;

/**
 * Energies, virials and triplet counts of the latest force evaluation.
 */
typedef struct TbForceReport {
  double e2;
  double e3;
  double w2;
  double w3;
  uint64_t triplets_traversed;
  uint64_t triplets_accepted;
  double triplet_seconds;
} TbForceReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Fills `out` with the default parameters.
 *
 * # Safety
 * `out` must be null or point to writable memory for one `TbParams`.
 */
enum TbStatus tb_params_default(struct TbParams *out);

/**
 * Creates a system of `n` particles at rest and evaluates the initial forces.
 *
 * # Safety
 * `box_lengths` must hold 3 values, `positions` `3 * n` values, `out` one pointer.
 */
enum TbStatus tb_system_new(const struct TbParams *params,
                            const double *box_lengths,
                            const double *positions,
                            size_t n,
                            size_t threads,
                            struct TbSystem **out);

/**
 * # Safety
 * `sys` must come from `tb_system_new` and not be used afterwards.
 */
void tb_system_free(struct TbSystem *sys);

/**
 * Particle count, 0 for a null handle.
 *
 * # Safety
 * `sys` must be null or a live handle.
 */
size_t tb_system_len(const struct TbSystem *sys);

/**
 * # Safety
 * `sys` must be a live handle and `velocities` hold `3 * n` values.
 */
enum TbStatus tb_system_set_velocities(struct TbSystem *sys, const double *velocities, size_t n);

/**
 * Maxwell-Boltzmann velocities at `t_target` with zero net momentum.
 *
 * # Safety
 * `sys` must be a live handle.
 */
enum TbStatus tb_system_init_velocities(struct TbSystem *sys, double t_target, uint64_t seed);

/**
 * Recomputes forces at the current positions.
 *
 * # Safety
 * `sys` must be a live handle; `report` may be null.
 */
enum TbStatus tb_system_compute_forces(struct TbSystem *sys, struct TbForceReport *report);

/**
 * Advances `steps` velocity-Verlet steps; `rescale` non-zero applies the thermostat every step.
 * `report` receives the last step's evaluation.
 *
 * # Safety
 * `sys` must be a live handle; `report` may be null.
 */
enum TbStatus tb_system_step(struct TbSystem *sys,
                             uint64_t steps,
                             int32_t rescale,
                             struct TbForceReport *report);

/**
 * Copies positions into `out`, which holds room for `capacity` triples.
 *
 * # Safety
 * `out` must be writable for `3 * capacity` values.
 */
enum TbStatus tb_system_positions(const struct TbSystem *sys, double *out, size_t capacity);

/**
 * # Safety
 * As `tb_system_positions`.
 */
enum TbStatus tb_system_velocities(const struct TbSystem *sys, double *out, size_t capacity);

/**
 * # Safety
 * As `tb_system_positions`.
 */
enum TbStatus tb_system_forces(const struct TbSystem *sys, double *out, size_t capacity);

/**
 * Accepted over traversed triplets, in percent.
 *
 * # Safety
 * `report` and `out` must be valid.
 */
enum TbStatus tb_hitrate(const struct TbForceReport *report, double *out);

/**
 * Million molecule updates per second.
 *
 * # Safety
 * `out` must be valid.
 */
enum TbStatus tb_mmups(size_t n, uint64_t iterations, double wall_seconds, double *out);

/**
 * Triple-dipole energy of a triangle with the given sides.
 *
 * # Safety
 * `out` must be valid.
 */
enum TbStatus tb_atm_energy(double r_ij, double r_ik, double r_jk, double nu, double *out);

/**
 * Message of the last failure on this thread; empty if none.
 */
const char *tb_last_error(void);

const char *tb_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRIBODY_H */
