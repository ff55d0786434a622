/* C interface for the proxident composite optimization library.
 *
 * All functions return a proxident error code (PROXIDENT_OK on success)
 * and deliver results through out-pointers. Handles are opaque and must
 * be released with the matching *_free function; the free functions
 * accept NULL. All functions are thread-compatible: distinct handles may
 * be used from distinct threads, but a single handle must not be used
 * concurrently.
 */

#ifndef PROXIDENT_H
#define PROXIDENT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Error codes. */
#define PROXIDENT_OK 0
#define PROXIDENT_ERR_NULL_POINTER 1
#define PROXIDENT_ERR_INVALID_ARGUMENT 2
#define PROXIDENT_ERR_UNKNOWN_SCENARIO 3
#define PROXIDENT_ERR_SOLVER 4
#define PROXIDENT_ERR_OUT_OF_RANGE 5
#define PROXIDENT_ERR_BUFFER_TOO_SMALL 6

/* Algorithm selectors. */
#define PROXIDENT_ALGO_PG 0     /* proximal gradient */
#define PROXIDENT_ALGO_APG 1    /* accelerated proximal gradient (FISTA) */
#define PROXIDENT_ALGO_MFISTA 2 /* monotone FISTA */
#define PROXIDENT_ALGO_T1 3     /* provisional acceleration, test 1 */
#define PROXIDENT_ALGO_T2 4     /* provisional acceleration, test 2 */

/* Opaque handles. */
typedef struct ProxidentScenario ProxidentScenario;
typedef struct ProxidentTrace ProxidentTrace;

/* Per-iteration summary. */
typedef struct ProxidentRecord {
  size_t k;                     /* iteration index, starting at 1 */
  size_t prox_steps_cumulative; /* prox steps consumed through this record */
  double f_value;               /* composite objective at the iterate */
  int accelerated;              /* 1 if the inertial step was kept */
  int in_z;                     /* 1 if the test's proximity check held */
  size_t signature_len;         /* certified active manifolds */
} ProxidentRecord;

/* Static description of an error code; never NULL. */
const char *proxident_error_message(int code);

/* Build a named benchmark scenario ("lasso", "lasso-strong", "nuclear",
 * "nuclear-small", "group-pball", "fixture-l1", "fixture-ball13",
 * "fixture-ball26"). */
int proxident_scenario_create(const char *name, uint64_t seed,
                              ProxidentScenario **out);
void proxident_scenario_free(ProxidentScenario *scenario);

/* Number of optimization variables. */
int proxident_scenario_dim(const ProxidentScenario *scenario, size_t *out);

/* Default prox-step budget for a named scenario; 0 for unknown names. */
size_t proxident_default_budget(const char *name);

/* Run one algorithm from the scenario's stored starting point. budget is
 * the proximal-step budget; 0 selects the scenario default. */
int proxident_run(const ProxidentScenario *scenario, int algo, size_t budget,
                  ProxidentTrace **out);
void proxident_trace_free(ProxidentTrace *trace);

int proxident_trace_len(const ProxidentTrace *trace, size_t *out);
int proxident_trace_final_f(const ProxidentTrace *trace, double *out);
int proxident_trace_prox_steps(const ProxidentTrace *trace, size_t *out);
int proxident_trace_record(const ProxidentTrace *trace, size_t index,
                           ProxidentRecord *out);
int proxident_trace_final_signature_len(const ProxidentTrace *trace,
                                        size_t *out);
/* Writes 1 if the final iterate certifies coordinate == 0, else 0. */
int proxident_trace_coordinate_is_zero(const ProxidentTrace *trace,
                                       size_t coordinate, int *out);
/* Copy the final iterate into buf (capacity len doubles); *written gets
 * the required length. Fails with PROXIDENT_ERR_BUFFER_TOO_SMALL if len
 * is insufficient, still reporting the required length. */
int proxident_trace_final_point(const ProxidentTrace *trace, double *buf,
                                size_t len, size_t *written);

#ifdef __cplusplus
}
#endif

#endif /* PROXIDENT_H */
