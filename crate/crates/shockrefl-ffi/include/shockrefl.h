#ifndef SHOCKREFL_H
#define SHOCKREFL_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. The numeric values of the first five match the command-line
 * exit codes.
 */
typedef enum SrStatus {
  SR_STATUS_OK = 0,
  SR_STATUS_NULL_POINTER = 1,
  SR_STATUS_INVALID_INPUT = 2,
  SR_STATUS_NO_CONVERGENCE = 3,
  SR_STATUS_REPORT_FAILED = 4,
  SR_STATUS_ATTACHED_SHOCK = 5,
  SR_STATUS_DETACHED = 6,
  SR_STATUS_INDEX_OUT_OF_RANGE = 7,
  SR_STATUS_INTERNAL = 99,
} SrStatus;

/**
 * Opaque handle to a solved and certified field.
 */
typedef struct SrSolution SrSolution;

/**
 * Incident flow behind the planar shock.
 */
typedef struct SrIncident {
  double u1;
  double xi1_0;
  double k1;
  double c1;
} SrIncident;

/**
 * Uniform state `phi = -|xi|^2/2 + u xi1 + v xi2 + k` with its density.
 */
typedef struct SrState {
  double u;
  double v;
  double k;
  double rho;
  double c;
} SrState;

/**
 * Weak and strong reflected states. `has_strong` is 0 at 90 degrees.
 */
typedef struct SrState2 {
  struct SrState weak;
  struct SrState strong;
  int32_t has_strong;
  double mach_p0_weak;
} SrState2;

/**
 * Transition angles in degrees.
 */
typedef struct SrAngles {
  double theta_d;
  double theta_s;
  double rho_c;
  int32_t attachment_possible;
} SrAngles;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * # Safety
 * `result` must be null or point to writable memory for an `SrIncident`.
 */
enum SrStatus sr_incident_state(double rho0, double rho1, double gamma, struct SrIncident *result);

/**
 * # Safety
 * `result` must be null or point to writable memory for an `SrState2`.
 */
enum SrStatus sr_state2_solve(double rho0,
                              double rho1,
                              double gamma,
                              double theta_deg,
                              struct SrState2 *result);

/**
 * # Safety
 * `result` must be null or point to writable memory for an `SrAngles`.
 */
enum SrStatus sr_angles(double rho0, double rho1, double gamma, struct SrAngles *result);

/**
 * Solves at `theta_deg` by continuation from 90 degrees in steps of
 * `step_deg` on an `n x n` grid, then runs the admissibility checks.
 * On success `*handle` owns a solution that must be released with
 * [`sr_solution_free`]; a failed check still yields a handle and returns
 * `SR_STATUS_REPORT_FAILED`.
 *
 * # Safety
 * `handle` must be null or point to writable memory for a pointer.
 */
enum SrStatus sr_solve(double rho0,
                       double rho1,
                       double gamma,
                       double theta_deg,
                       uintptr_t n,
                       double step_deg,
                       struct SrSolution **handle);

/**
 * Releases a handle from [`sr_solve`]. Null is ignored.
 *
 * # Safety
 * `handle` must be null or a pointer returned by [`sr_solve`] that has not
 * been freed.
 */
void sr_solution_free(struct SrSolution *handle);

/**
 * Grid size `n1 x n2` of a solution.
 *
 * # Safety
 * `handle` must be null or live; `n1` and `n2` null or writable.
 */
enum SrStatus sr_solution_dims(const struct SrSolution *handle, uintptr_t *n1, uintptr_t *n2);

/**
 * Node coordinates and potential at grid index `(i, j)`.
 *
 * # Safety
 * `handle` must be null or live; the out pointers null or writable.
 */
enum SrStatus sr_solution_node(const struct SrSolution *handle,
                               uintptr_t i,
                               uintptr_t j,
                               double *xi1,
                               double *xi2,
                               double *phi);

/**
 * Wedge angle in degrees and the admissibility verdict (1 pass, 0 fail).
 *
 * # Safety
 * `handle` must be null or live; the out pointers null or writable.
 */
enum SrStatus sr_solution_summary(const struct SrSolution *handle,
                                  double *theta_deg,
                                  int32_t *verdict);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SHOCKREFL_H */
