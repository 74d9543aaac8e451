/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef MONOFLOW_H
#define MONOFLOW_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MfForceMethod {
  MF_FORCE_METHOD_PRESSURE_DIRECT = 0,
  MF_FORCE_METHOD_BLASIUS_SPEED = 1,
  MF_FORCE_METHOD_COMPONENT_SC = 2,
  MF_FORCE_METHOD_MONOGENIC_FORM = 3,
} MfForceMethod;

typedef enum MfStatus {
  MF_STATUS_OK = 0,
  MF_STATUS_NULL_POINTER = 1,
  MF_STATUS_INVALID_UTF8 = 2,
  MF_STATUS_CONFIG_ERROR = 3,
  MF_STATUS_COMPUTE_ERROR = 4,
  /*
   The method's hypotheses do not hold for this scenario.
   */
  MF_STATUS_HYPOTHESIS_VIOLATED = 5,
  MF_STATUS_PANIC = 6,
} MfStatus;

/*
 A flow scenario built from a JSON configuration.
 */
typedef struct MfScenario MfScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread; empty after a success.
 The pointer stays valid until the next library call on the same thread.
 */
const char *mf_last_error(void);

/*
 Builds a scenario from a JSON configuration.

 # Safety
 `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum MfStatus mf_scenario_from_json(const char *json, struct MfScenario **out);

/*
 Releases a scenario; null is ignored.

 # Safety
 `sc` must come from [`mf_scenario_from_json`] and not be used afterwards.
 */
void mf_scenario_free(struct MfScenario *sc);

/*
 Force on the body by `method` (an `MfForceMethod` value), written to `out[0..3]`.

 # Safety
 `sc` must be a live scenario and `out` must hold three doubles.
 */
enum MfStatus mf_scenario_force(const struct MfScenario *sc, int method, double *out);

/*
 Moment about `reference[0..3]` by the speed formula, written to `out[0..3]`.

 # Safety
 `sc` must be a live scenario; `reference` and `out` must hold three doubles.
 */
enum MfStatus mf_scenario_moment(const struct MfScenario *sc, const double *reference, double *out);

/*
 Hamilton product `a b` of quaternions stored as `(q0, q1, q2, q3)`.

 # Safety
 `a`, `b` and `out` must each hold four doubles.
 */
enum MfStatus mf_quaternion_mul(const double *a, const double *b, double *out);

/*
 Cauchy kernel `x̄ / (4π|x|³)` at the point `x[0..3]`, written to `out[0..4]`.

 # Safety
 `x` must hold three doubles and `out` four.
 */
enum MfStatus mf_cauchy_kernel(const double *x, double *out);

/*
 Runs a command-line subcommand (`verify`, `force`, `moment`,
 `convergence`, `reduce2d`) on a JSON configuration. The report is stored
 in `*report` (free with [`mf_string_free`]) and `*passed` is set to 1 when
 every check passed, 0 otherwise.

 # Safety
 `command` and `config_json` must be NUL-terminated strings; `report` and
 `passed` must be valid pointers.
 */
enum MfStatus mf_run_json(const char *command, const char *config_json, char **report, int *passed);

/*
 Releases a string returned by the library; null is ignored.

 # Safety
 `s` must come from this library and not be used afterwards.
 */
void mf_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MONOFLOW_H */
