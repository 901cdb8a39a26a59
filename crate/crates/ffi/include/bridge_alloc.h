#ifndef BRIDGE_ALLOC_H
#define BRIDGE_ALLOC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BaStatus {
  BA_STATUS_OK = 0,
  BA_STATUS_NULL_POINTER = 1,
  BA_STATUS_INVALID_ARGUMENT = 2,
  BA_STATUS_WITHDRAWAL_EXCEEDS_INVESTMENT = 3,
  BA_STATUS_NEGATIVE_AMOUNT = 4,
  BA_STATUS_UNDEFINED_RATIO = 5,
  BA_STATUS_DEGENERATE_DENOMINATOR = 6,
  BA_STATUS_UNDEFINED_SHARE = 7,
  BA_STATUS_INDEX_OUT_OF_BOUNDS = 8,
  BA_STATUS_PANIC = 9,
} BaStatus;

// Evaluated manual and random scenarios.
typedef struct BaBatch BaBatch;

// A two-network rebalancing problem under construction.
typedef struct BaScenario BaScenario;

// A network's position against its capacity band.
typedef struct BaAssessment {
  double total_with_tbd;
  double min_capacity;
  double max_capacity;
  double outside_band;
  double max_send;
  double max_receive;
} BaAssessment;

// Signed transfers; positive `*_pq` moves money from P to Q.
typedef struct BaDecision {
  double simple_pq;
  double simple_qp;
  double delta_pq;
  double delta_qp;
} BaDecision;

// Components of one directed transfer expression.
typedef struct BaTerms {
  double comparison;
  double indicator;
  double first_simple;
  double first_delta;
  double second;
} BaTerms;

// Everything one two-network evaluation produces.
typedef struct BaOutcome {
  double collect_deploy_diff;
  double raw_stretch;
  double capped_stretch;
  double total_pq_with_tbd;
  struct BaAssessment p;
  struct BaAssessment q;
  struct BaDecision decision;
  struct BaTerms terms_pq;
  struct BaTerms terms_qp;
  double net_pq;
  bool multi_round;
  bool min_above_other_max;
  bool band_range_too_narrow;
} BaOutcome;

// Simulation settings; see [`ba_sim_params_default`].
typedef struct BaSimParams {
  double min_weight_seed;
  double max_weight_seed;
  double delta;
  double max_bridge_stretch;
  double min_network_weight_trim;
  double max_network_weight_trim;
  double min_bridge_capacity;
  double max_bridge_capacity;
  double min_current_amount;
  double max_current_amount;
  size_t n_assets_p;
  size_t n_assets_q;
  double asset_availability;
  size_t n_scenarios;
  uint64_t rng_seed;
} BaSimParams;

// One batch row. `status` is the row's own outcome; `outcome` is zeroed
// when it is not `Ok`.
typedef struct BaBatchRow {
  size_t row;
  bool is_manual;
  uint64_t random_index;
  double min_global_weight;
  double max_global_weight;
  double cap_pq;
  double cap_qp;
  double tbd_p;
  double curr_p;
  double tbd_q;
  double curr_q;
  enum BaStatus status;
  struct BaOutcome outcome;
} BaBatchRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static description of a status code. Never null, never freed.
const char *ba_status_message(enum BaStatus status);

// Message of the last failed call on this thread; empty if none. The
// pointer stays valid until the next failing call on the same thread.
const char *ba_last_error_message(void);

// `max(x + delta, 0) / (|x| + delta)`.
double ba_positivity_indicator(double x, double delta);

// Both transfer formulations for two already assessed networks.
//
// # Safety
// `p`, `q` and `out` must be valid pointers or null.
enum BaStatus ba_transfer(const struct BaAssessment *p,
                          const struct BaAssessment *q,
                          double cap_pq,
                          double cap_qp,
                          double delta,
                          struct BaDecision *out);

// Creates a scenario with default algorithm constants and no assets.
//
// # Safety
// `out` must be a valid pointer or null. On success `*out` owns a handle
// that must be released with [`ba_scenario_free`].
enum BaStatus ba_scenario_new(double curr_p,
                              double tbd_p,
                              double curr_q,
                              double tbd_q,
                              double cap_pq,
                              double cap_qp,
                              struct BaScenario **out);

// Lists a global asset with its raw band.
//
// # Safety
// `scenario` must come from [`ba_scenario_new`]; `asset_id` must be a
// NUL-terminated UTF-8 string.
enum BaStatus ba_scenario_add_asset(struct BaScenario *scenario,
                                    const char *asset_id,
                                    double min,
                                    double ideal,
                                    double max,
                                    bool on_p,
                                    bool on_q);

// Replaces the stretch cap, indicator width and trim bounds.
//
// # Safety
// `scenario` must come from [`ba_scenario_new`].
enum BaStatus ba_scenario_set_config(struct BaScenario *scenario,
                                     double max_stretch,
                                     double delta,
                                     double min_trim,
                                     double max_trim);

// Runs the full two-network calculation.
//
// # Safety
// `scenario` must come from [`ba_scenario_new`]; `out` must be valid or null.
enum BaStatus ba_scenario_evaluate(const struct BaScenario *scenario, struct BaOutcome *out);

// # Safety
// `scenario` must come from [`ba_scenario_new`] and not be used afterwards.
// Null is ignored.
void ba_scenario_free(struct BaScenario *scenario);

// # Safety
// `out` must be a valid pointer or null.
enum BaStatus ba_sim_params_default(struct BaSimParams *out);

// Runs the manual rows and `params->n_scenarios` random rows.
//
// # Safety
// `params` and `out` must be valid pointers or null. On success `*out` owns a
// handle that must be released with [`ba_batch_free`].
enum BaStatus ba_batch_run(const struct BaSimParams *params, struct BaBatch **out);

// Number of rows; 0 for a null handle.
//
// # Safety
// `batch` must come from [`ba_batch_run`] or be null.
size_t ba_batch_len(const struct BaBatch *batch);

// Copies row `index` (0-based) into `out`.
//
// # Safety
// `batch` must come from [`ba_batch_run`]; `out` must be valid or null.
enum BaStatus ba_batch_get(const struct BaBatch *batch, size_t index, struct BaBatchRow *out);

// # Safety
// `batch` must come from [`ba_batch_run`] and not be used afterwards.
// Null is ignored.
void ba_batch_free(struct BaBatch *batch);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BRIDGE_ALLOC_H */
