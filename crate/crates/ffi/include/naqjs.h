#ifndef NAQJS_H
#define NAQJS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum NaqjsStatus {
  NAQJS_STATUS_OK = 0,
  NAQJS_STATUS_NULL_POINTER = 1,
  NAQJS_STATUS_INVALID_UTF8 = 2,
  NAQJS_STATUS_INVALID_ARGUMENT = 3,
  NAQJS_STATUS_PARSE = 4,
  NAQJS_STATUS_SIMULATION = 5,
  NAQJS_STATUS_VERIFICATION = 6,
  NAQJS_STATUS_PANIC = 7,
} NaqjsStatus;

typedef enum NaqjsCircuitFormat {
  NAQJS_CIRCUIT_FORMAT_QASM = 0,
  NAQJS_CIRCUIT_FORMAT_JSON = 1,
} NaqjsCircuitFormat;

typedef enum NaqjsShotProfile {
  NAQJS_SHOT_PROFILE_NOISE_MODEL = 0,
  NAQJS_SHOT_PROFILE_DEVICE = 1,
} NaqjsShotProfile;

typedef enum NaqjsPolicy {
  NAQJS_POLICY_FIFO = 0,
  NAQJS_POLICY_FIFO_P = 1,
  NAQJS_POLICY_NAQJS = 2,
} NaqjsPolicy;

typedef struct NaqjsCircuit NaqjsCircuit;

typedef struct NaqjsHardware NaqjsHardware;

typedef struct NaqjsReport NaqjsReport;

typedef struct NaqjsWorkload NaqjsWorkload;

// Scheduler weights and time model. Obtain defaults from
// [`naqjs_config_default`].
typedef struct NaqjsConfig {
  double alpha;
  double beta;
  double gamma;
  double eta;
  double delta_t;
  size_t repeats;
  bool aging;
  double shot_time_us;
  double overhead_s;
} NaqjsConfig;

// Outcome of [`naqjs_verify_circuit`].
typedef struct NaqjsVerification {
  // Every two-qubit gate sits on a coupling edge.
  bool legal;
  // False when the circuit is too wide for the state-vector check.
  bool checked_equivalence;
  bool equivalent;
  size_t swaps;
  size_t bridges;
  double epst_star;
} NaqjsVerification;

typedef struct NaqjsMetrics {
  double qpu_time;
  double tat_max;
  double tat_avg;
  double tat_std;
  double trf;
  double estimated_pst_avg;
  size_t rounds;
  double makespan;
  double scheduler_runtime;
} NaqjsMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer
// stays valid until the next failing call on the same thread.
const char *naqjs_last_error(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must come from this library and not have been freed.
void naqjs_string_free(char *s);

struct NaqjsConfig naqjs_config_default(void);

// Built-in device (`ring16`, `chain16` or `grid66`) with calibration drawn
// from `calibration_seed`.
//
// # Safety
// `name` must be a NUL-terminated string; `out` must be writable.
enum NaqjsStatus naqjs_hardware_builtin(const char *name,
                                        uint64_t calibration_seed,
                                        struct NaqjsHardware **out);

// Device from a calibration JSON document.
//
// # Safety
// `name` and `json` must be NUL-terminated strings; `out` must be writable.
enum NaqjsStatus naqjs_hardware_from_json(const char *name,
                                          const char *json,
                                          struct NaqjsHardware **out);

// Number of physical qubits, or 0 for a null handle.
//
// # Safety
// `hw` must be null or a live handle.
size_t naqjs_hardware_num_qubits(const struct NaqjsHardware *hw);

// # Safety
// `hw` must be null or a live handle, which is invalid afterwards.
void naqjs_hardware_free(struct NaqjsHardware *hw);

// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum NaqjsStatus naqjs_circuit_parse(const char *text,
                                     enum NaqjsCircuitFormat format,
                                     struct NaqjsCircuit **out);

// # Safety
// `c` must be null or a live handle.
size_t naqjs_circuit_num_qubits(const struct NaqjsCircuit *c);

// # Safety
// `c` must be null or a live handle.
size_t naqjs_circuit_len(const struct NaqjsCircuit *c);

// # Safety
// `c` must be null or a live handle, which is invalid afterwards.
void naqjs_circuit_free(struct NaqjsCircuit *c);

// Places the circuit on the idle device, maps and routes it, and checks
// coupling legality and (up to the state-vector width limit) equivalence
// with the original. A failed check is reported through `out`, not the
// status.
//
// # Safety
// `circuit` and `hw` must be live handles; `out` must be writable.
enum NaqjsStatus naqjs_verify_circuit(const struct NaqjsCircuit *circuit,
                                      const struct NaqjsHardware *hw,
                                      size_t repeats,
                                      uint64_t seed,
                                      double tol,
                                      struct NaqjsVerification *out);

// Synthetic workload. If `fit_to` is non-null, widths are capped at
// `floor(eta * N)` of that device.
//
// # Safety
// `fit_to` must be null or a live handle; `out` must be writable.
enum NaqjsStatus naqjs_workload_generate(size_t initial,
                                         size_t arrivals,
                                         enum NaqjsShotProfile profile,
                                         const struct NaqjsHardware *fit_to,
                                         double eta,
                                         uint64_t seed,
                                         struct NaqjsWorkload **out);

// Workload from JSON lines. Circuit file references resolve against
// `base_dir`, or the working directory if it is null.
//
// # Safety
// `text` must be a NUL-terminated string, `base_dir` null or one;
// `out` must be writable.
enum NaqjsStatus naqjs_workload_from_jsonl(const char *text,
                                           const char *base_dir,
                                           uint64_t seed,
                                           struct NaqjsWorkload **out);

// # Safety
// `w` must be null or a live handle.
size_t naqjs_workload_len(const struct NaqjsWorkload *w);

// JSON-lines text of the workload; release with [`naqjs_string_free`].
//
// # Safety
// `w` must be null or a live handle.
char *naqjs_workload_to_jsonl(const struct NaqjsWorkload *w);

// # Safety
// `w` must be null or a live handle, which is invalid afterwards.
void naqjs_workload_free(struct NaqjsWorkload *w);

// Replays the workload under `policy`. `config` may be null for defaults.
//
// # Safety
// `workload` and `hw` must be live handles, `config` null or readable;
// `out` must be writable.
enum NaqjsStatus naqjs_simulate(const struct NaqjsWorkload *workload,
                                const struct NaqjsHardware *hw,
                                enum NaqjsPolicy policy,
                                const struct NaqjsConfig *config,
                                uint64_t seed,
                                struct NaqjsReport **out);

// # Safety
// `report` must be a live handle; `out` must be writable.
enum NaqjsStatus naqjs_report_metrics(const struct NaqjsReport *report, struct NaqjsMetrics *out);

// Full report as JSON; release with [`naqjs_string_free`]. Null for a null
// handle.
//
// # Safety
// `report` must be null or a live handle.
char *naqjs_report_to_json(const struct NaqjsReport *report);

// # Safety
// `report` must be null or a live handle, which is invalid afterwards.
void naqjs_report_free(struct NaqjsReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NAQJS_H */
