#ifndef SINRSCHED_H
#define SINRSCHED_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success, everything else is negative.
 */
typedef enum SinrStatus {
  SINR_STATUS_OK = 0,
  SINR_STATUS_NULL_POINTER = -1,
  SINR_STATUS_INVALID_ARGUMENT = -2,
  SINR_STATUS_PARSE = -3,
  SINR_STATUS_UNKNOWN_LINK = -4,
  SINR_STATUS_TOO_LARGE = -5,
  SINR_STATUS_INFEASIBLE = -6,
  SINR_STATUS_IO = -7,
  SINR_STATUS_INTERNAL = -255,
} SinrStatus;

/**
 * Opaque validated instance.
 */
typedef struct SinrInstance SinrInstance;

/**
 * Opaque simulation trace.
 */
typedef struct SinrTrace SinrTrace;

/**
 * Simulation settings. Zero `n_estimate` or `max_slots` selects the default
 * (link count, at least 2; one million slots).
 */
typedef struct SinrSimConfig {
  double c3;
  uint64_t n_estimate;
  uint64_t max_slots;
  bool explicit_ack;
  uint64_t seed;
} SinrSimConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *sinr_version(void);

/**
 * Message for the last failure on this thread, or NULL. Valid until the
 * next failing call on the same thread.
 */
const char *sinr_last_error_message(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library.
 */
void sinr_string_free(char *s);

/**
 * # Safety
 * `path` must be a NUL-terminated string and `out` writable.
 */
enum SinrStatus sinr_instance_load(const char *path, struct SinrInstance **out_inst);

/**
 * # Safety
 * `inst` must be a live instance and `path` a NUL-terminated string.
 */
enum SinrStatus sinr_instance_save(const struct SinrInstance *inst, const char *path);

/**
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
enum SinrStatus sinr_instance_from_json(const char *json, struct SinrInstance **out_inst);

/**
 * Serializes to the JSON instance format; free the result with
 * [`sinr_string_free`].
 *
 * # Safety
 * `inst` must be a live instance and `out` writable.
 */
enum SinrStatus sinr_instance_to_json(const struct SinrInstance *inst, char **out_json);

/**
 * # Safety
 * `inst` must be NULL or an instance from this library not yet freed.
 */
void sinr_instance_free(struct SinrInstance *inst);

/**
 * # Safety
 * `out` must be writable.
 */
enum SinrStatus sinr_gen_gadget(size_t n, double alpha, struct SinrInstance **out_inst);

/**
 * Non-positive `c` or `epsilon` selects the automatic choice.
 *
 * # Safety
 * `out` must be writable.
 */
enum SinrStatus sinr_gen_hub_tree(size_t n,
                                  double alpha,
                                  double c,
                                  double epsilon,
                                  struct SinrInstance **out_inst);

/**
 * Random planar instance with uniform unit power in a 100 x 100 square,
 * link lengths in [1, 10].
 *
 * # Safety
 * `out` must be writable.
 */
enum SinrStatus sinr_gen_random(size_t n,
                                double alpha,
                                double beta,
                                double noise,
                                uint64_t seed,
                                struct SinrInstance **out_inst);

/**
 * # Safety
 * `inst` must be a live instance and `out` writable.
 */
enum SinrStatus sinr_instance_link_count(const struct SinrInstance *inst, size_t *out_count);

/**
 * # Safety
 * `inst` must be a live instance and `out` writable.
 */
enum SinrStatus sinr_affectance(const struct SinrInstance *inst,
                                size_t w,
                                size_t v,
                                bool capped,
                                double *out_value);

/**
 * SINR at `v` when exactly the `len` links in `ids` transmit (`v` among them).
 *
 * # Safety
 * `ids` must point to `len` readable ids and `out` must be writable.
 */
enum SinrStatus sinr_sinr(const struct SinrInstance *inst,
                          size_t v,
                          const size_t *ids,
                          size_t len,
                          double *out_value);

/**
 * # Safety
 * `ids` must point to `len` readable ids and `out` must be writable.
 */
enum SinrStatus sinr_is_feasible(const struct SinrInstance *inst,
                                 const size_t *ids,
                                 size_t len,
                                 bool *out_flag);

/**
 * # Safety
 * `ids` must point to `len` readable ids and `out` must be writable.
 */
enum SinrStatus sinr_is_delta_signal(const struct SinrInstance *inst,
                                     const size_t *ids,
                                     size_t len,
                                     double delta,
                                     bool *out_flag);

/**
 * Exact scheduling number; `SINR_STATUS_TOO_LARGE` above 15 links.
 *
 * # Safety
 * `inst` must be a live instance and `out` writable.
 */
enum SinrStatus sinr_scheduling_number_exact(const struct SinrInstance *inst, size_t *out_t);

/**
 * # Safety
 * `inst` must be a live instance and `out` writable.
 */
enum SinrStatus sinr_lambda_exact(const struct SinrInstance *inst, double *out_value);

/**
 * Exact (`exact = true`, at most 20 links) or peeling estimate.
 *
 * # Safety
 * `inst` must be a live instance and `out` writable.
 */
enum SinrStatus sinr_max_avg_affectance(const struct SinrInstance *inst,
                                        bool exact,
                                        double *out_value);

/**
 * # Safety
 * `inst` must be a live instance and `out` writable.
 */
enum SinrStatus sinr_dual_instance(const struct SinrInstance *inst, struct SinrInstance **out_inst);

/**
 * Defaults: `c3 = 1`, automatic size estimate and slot cap, free
 * acknowledgements, seed 0.
 */
struct SinrSimConfig sinr_sim_config_default(void);

/**
 * # Safety
 * `inst` must be a live instance, `cfg` readable and `out` writable.
 */
enum SinrStatus sinr_simulate(const struct SinrInstance *inst,
                              const struct SinrSimConfig *cfg,
                              struct SinrTrace **out_trace);

/**
 * Slot by which every link finished, or 0 for a truncated run.
 *
 * # Safety
 * `trace` must be a live trace and `out` writable.
 */
enum SinrStatus sinr_trace_completion_slot(const struct SinrTrace *trace_ptr, uint64_t *out_slot);

/**
 * # Safety
 * `trace` must be a live trace and `out` writable.
 */
enum SinrStatus sinr_trace_truncated(const struct SinrTrace *trace_ptr, bool *out_flag);

/**
 * # Safety
 * `trace` must be a live trace and `out` writable.
 */
enum SinrStatus sinr_trace_slots_run(const struct SinrTrace *trace_ptr, uint64_t *out_slots);

/**
 * Completion slot of one link, 0 if it never finished.
 *
 * # Safety
 * `trace` must be a live trace and `out` writable.
 */
enum SinrStatus sinr_trace_link_completion(const struct SinrTrace *trace_ptr,
                                           size_t link,
                                           uint64_t *out_slot);

/**
 * Full trace as JSON; free with [`sinr_string_free`].
 *
 * # Safety
 * `trace` must be a live trace and `out` writable.
 */
enum SinrStatus sinr_trace_to_json(const struct SinrTrace *trace_ptr, char **out_json);

/**
 * # Safety
 * `trace` must be NULL or a trace from this library not yet freed.
 */
void sinr_trace_free(struct SinrTrace *trace_ptr);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SINRSCHED_H */
