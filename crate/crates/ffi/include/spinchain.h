#ifndef SPINCHAIN_H
#define SPINCHAIN_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status returned by every fallible entry point.
 */
typedef enum ScStatus {
  SC_STATUS_OK = 0,
  SC_STATUS_NULL_POINTER = 1,
  SC_STATUS_INVALID_ARGUMENT = 2,
  /**
   * A numerical invariant failed (eigensolver, unitarity, vanished amplitude).
   */
  SC_STATUS_NUMERICAL = 3,
  /**
   * Caller buffer is too small; the required length is reported.
   */
  SC_STATUS_BUFFER_TOO_SMALL = 4,
  /**
   * A Rust panic was caught at the boundary.
   */
  SC_STATUS_PANIC = 5,
} ScStatus;

typedef enum ScDecayStatus {
  /**
   * Arrays shorter than five boxes have no interior rows to check.
   */
  SC_DECAY_STATUS_NOT_CHECKED = 0,
  SC_DECAY_STATUS_PASS = 1,
  SC_DECAY_STATUS_FAIL = 2,
  SC_DECAY_STATUS_OUT_OF_REGIME = 3,
} ScDecayStatus;

typedef enum ScScenario {
  SC_SCENARIO_IDLE = 0,
  SC_SCENARIO_SIGMA_Z = 1,
  SC_SCENARIO_SIGMA_X = 2,
  SC_SCENARIO_INTER_QUBIT = 3,
} ScScenario;

/**
 * Static chain parameters (spin count, J1, J2, X1).
 */
typedef struct ScChain ScChain;

/**
 * Capacitance inverse and Ising couplings of a Cooper-pair-box array.
 */
typedef struct ScJosephsonReport ScJosephsonReport;

/**
 * Logical-qubit layout on a chain.
 */
typedef struct ScLayout ScLayout;

/**
 * Piecewise-constant control schedule.
 */
typedef struct ScSchedule ScSchedule;

typedef struct ScDeviation {
  double exact_raw;
  double exact_phase_opt;
  /**
   * Closed-form lower bound; NaN for full-chain results.
   */
  double lower_bound;
  /**
   * Population the ideal evolution moves out of the subspace; 0 for
   * reduced-space results.
   */
  double leakage;
} ScDeviation;

/**
 * Two-qubit logical action of a simulated gate.
 */
typedef struct ScGateReport {
  /**
   * Average gate fidelity against diag(1, e^{i phase_phi}, 1, 1).
   */
  double fidelity;
  double leakage;
  double phase_phi;
  /**
   * 4x4 logical matrix, row-major, global phase fixed by element (0, 0).
   */
  double matrix_re[16];
  double matrix_im[16];
} ScGateReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static NUL-terminated string.
 */
const char *sc_version(void);

/**
 * Gate deviation from the reduced-space formulas; `scenario` is an
 * `ScScenario` value.
 *
 * # Safety
 * `out` must be writable.
 */
enum ScStatus sc_scenario_deviation(int32_t scenario_code,
                                    size_t n_logical,
                                    double j2,
                                    double t,
                                    struct ScDeviation *out);

/**
 * Gate deviation measured on the simulated 2n+1 spin chain; `target` is
 * the driven logical qubit (1-based; first of the pair for inter_qubit).
 *
 * # Safety
 * `out` must be writable.
 */
enum ScStatus sc_full_chain_deviation(int32_t scenario_code,
                                      size_t n_logical,
                                      double j1,
                                      double j2,
                                      double t,
                                      double field,
                                      size_t target,
                                      struct ScDeviation *out);

/**
 * Largest residual logical field or coupling left after the frozen
 * blockades; `couplings[k]` is the Ising strength at distance k + 1.
 *
 * # Safety
 * `layout` must be live; `couplings` must hold `n_couplings` doubles.
 */
enum ScStatus sc_blockade_residual(const struct ScLayout *layout,
                                   const double *couplings,
                                   size_t n_couplings,
                                   double *out);

/**
 * Builds the array (gate charges 1/2, reduced units) and extracts couplings.
 *
 * # Safety
 * `out` must be writable.
 */
enum ScStatus sc_josephson_report(size_t n_boxes,
                                  double c_g,
                                  double c_j,
                                  double c_c,
                                  double x1_max,
                                  struct ScJosephsonReport **out);

/**
 * # Safety
 * `report` must be NULL or a handle from this library, not yet freed.
 */
void sc_josephson_free(struct ScJosephsonReport *report);

/**
 * Coupling ratio c_c / (c_g + c_j), or NaN for NULL.
 *
 * # Safety
 * `report` must be NULL or a live handle.
 */
double sc_josephson_epsilon(const struct ScJosephsonReport *report);

/**
 * Coefficient of Z_i Z_j (0-based, symmetric in i and j, i != j).
 *
 * # Safety
 * `report` must be live; `out` must be writable.
 */
enum ScStatus sc_josephson_coupling(const struct ScJosephsonReport *report,
                                    size_t i,
                                    size_t j,
                                    double *out);

/**
 * Entry (i, j) of the inverse capacitance matrix.
 *
 * # Safety
 * `report` must be live; `out` must be writable.
 */
enum ScStatus sc_josephson_c_inverse(const struct ScJosephsonReport *report,
                                     size_t i,
                                     size_t j,
                                     double *out);

/**
 * Coefficient of Z_i.
 *
 * # Safety
 * `report` must be live; `out` must be writable.
 */
enum ScStatus sc_josephson_linear_field(const struct ScJosephsonReport *report,
                                        size_t i,
                                        double *out);

/**
 * Verdict of the interior decay check.
 *
 * # Safety
 * `report` must be live; `out` must be writable.
 */
enum ScStatus sc_josephson_decay_status(const struct ScJosephsonReport *report,
                                        enum ScDecayStatus *out);

/**
 * Chain with the array's nearest and next-nearest couplings, one spin per box.
 *
 * # Safety
 * `report` must be live; `out` must be writable.
 */
enum ScStatus sc_josephson_effective_chain(const struct ScJosephsonReport *report,
                                           struct ScChain **out);

/**
 * Message of the last failed call on this thread, or NULL after a success.
 *
 * The pointer stays valid until the next call into the library on the same
 * thread.
 */
const char *sc_last_error(void);

/**
 * CPHASE between logical qubits 0 and 1 with idle time `tau`.
 * `naive` compiles the pulses as if J2 were zero.
 *
 * # Safety
 * `chain` and `layout` must be live handles; `out` must be writable.
 */
enum ScStatus sc_compile_cphase(const struct ScChain *chain,
                                const struct ScLayout *layout,
                                double tau,
                                bool naive,
                                struct ScSchedule **out);

/**
 * CPHASE with a requested phase `phi` (mod 2 pi).
 *
 * # Safety
 * As for `sc_compile_cphase`.
 */
enum ScStatus sc_compile_cphase_with_phase(const struct ScChain *chain,
                                           const struct ScLayout *layout,
                                           double phi,
                                           bool naive,
                                           struct ScSchedule **out);

/**
 * exp(-i angle sigma^x / 2) on one logical qubit.
 *
 * # Safety
 * As for `sc_compile_cphase`.
 */
enum ScStatus sc_logical_sigma_x(const struct ScChain *chain,
                                 const struct ScLayout *layout,
                                 size_t qubit,
                                 double angle,
                                 struct ScSchedule **out);

/**
 * exp(i phi sigma^z) on logical qubit 0 or 1, built from CPHASE and flips.
 *
 * # Safety
 * As for `sc_compile_cphase`.
 */
enum ScStatus sc_logical_sigma_z(const struct ScChain *chain,
                                 const struct ScLayout *layout,
                                 size_t qubit,
                                 double phi,
                                 bool naive,
                                 struct ScSchedule **out);

/**
 * Runs `schedule` on the full chain (J2 included) and reports its action
 * on a two-qubit layout.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum ScStatus sc_simulate_gate(const struct ScChain *chain,
                               const struct ScLayout *layout,
                               const struct ScSchedule *schedule,
                               struct ScGateReport *out);

/**
 * Full propagator of `schedule`, written row-major into `re` and `im`,
 * each holding at least `len` = 4^n_spins values. On `BufferTooSmall`
 * the needed length is stored in `required` (which may be NULL).
 *
 * # Safety
 * Handles must be live; `re` and `im` must hold `len` doubles.
 */
enum ScStatus sc_evolve(const struct ScChain *chain,
                        const struct ScSchedule *schedule,
                        bool include_long_range,
                        double *re,
                        double *im,
                        size_t len,
                        size_t *required);

/**
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum ScStatus sc_chain_new(size_t n_spins,
                           double j1,
                           double j2,
                           double x1_max,
                           struct ScChain **out);

/**
 * # Safety
 * `chain` must be NULL or a handle from this library, not yet freed.
 */
void sc_chain_free(struct ScChain *chain);

/**
 * Reads back the chain parameters; any output pointer may be NULL.
 *
 * # Safety
 * `chain` must be a live handle; non-NULL outputs must be writable.
 */
enum ScStatus sc_chain_params(const struct ScChain *chain,
                              size_t *n_spins,
                              double *j1,
                              double *j2,
                              double *x1_max);

/**
 * Two spins per logical qubit, blocks of `m` blockade spins in |0>.
 *
 * # Safety
 * `out` must be writable.
 */
enum ScStatus sc_layout_pair_encoded(size_t n_logical, size_t m, struct ScLayout **out);

/**
 * One spin per logical qubit with alternating single blockades.
 *
 * # Safety
 * `out` must be writable.
 */
enum ScStatus sc_layout_single_spin(size_t n_logical, struct ScLayout **out);

/**
 * Physical spins the layout occupies, or 0 for NULL.
 *
 * # Safety
 * `layout` must be NULL or a live handle.
 */
size_t sc_layout_n_spins(const struct ScLayout *layout);

/**
 * # Safety
 * `layout` must be NULL or a handle from this library, not yet freed.
 */
void sc_layout_free(struct ScLayout *layout);

/**
 * Parses the JSON interchange form `{"segments": [{duration, bx, bz, jxy}]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum ScStatus sc_schedule_from_json(const char *json, struct ScSchedule **out);

/**
 * Serializes a schedule; release the string with `sc_string_free`.
 *
 * # Safety
 * `schedule` must be a live handle; `out` must be writable.
 */
enum ScStatus sc_schedule_to_json(const struct ScSchedule *schedule, char **out);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void sc_string_free(char *s);

/**
 * Number of segments, or 0 for NULL.
 *
 * # Safety
 * `schedule` must be NULL or a live handle.
 */
size_t sc_schedule_len(const struct ScSchedule *schedule);

/**
 * Total duration, or NaN for NULL.
 *
 * # Safety
 * `schedule` must be NULL or a live handle.
 */
double sc_schedule_duration(const struct ScSchedule *schedule);

/**
 * # Safety
 * `schedule` must be NULL or a handle from this library, not yet freed.
 */
void sc_schedule_free(struct ScSchedule *schedule);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPINCHAIN_H */
