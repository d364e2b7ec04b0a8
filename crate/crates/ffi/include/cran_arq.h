#ifndef CRAN_ARQ_H
#define CRAN_ARQ_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CranArqStatus {
  CRAN_ARQ_STATUS_OK = 0,
  /**
   * Null pointer, bad UTF-8 or an out-of-range enum value.
   */
  CRAN_ARQ_STATUS_INVALID_ARGUMENT = 1,
  /**
   * Invalid or infeasible configuration.
   */
  CRAN_ARQ_STATUS_CONFIG = 2,
  /**
   * Quadrature, solver convergence or a non-ergodic chain.
   */
  CRAN_ARQ_STATUS_NUMERIC = 3,
  /**
   * The chain exceeded the state cap.
   */
  CRAN_ARQ_STATUS_CAPACITY = 4,
  /**
   * A Rust panic was caught at the boundary.
   */
  CRAN_ARQ_STATUS_INTERNAL = 5,
} CranArqStatus;

typedef enum CranArqProtocol {
  CRAN_ARQ_PROTOCOL_STOP_AND_WAIT = 0,
  CRAN_ARQ_PROTOCOL_GO_BACK_N = 1,
  CRAN_ARQ_PROTOCOL_SELECTIVE_REPEAT = 2,
} CranArqProtocol;

typedef enum CranArqArchitecture {
  CRAN_ARQ_ARCHITECTURE_CONVENTIONAL = 0,
  CRAN_ARQ_ARCHITECTURE_CRAN = 1,
  CRAN_ARQ_ARCHITECTURE_HYBRID = 2,
} CranArqArchitecture;

/**
 * Opaque built chain.
 */
typedef struct CranArqChain CranArqChain;

/**
 * Opaque experiment configuration.
 */
typedef struct CranArqConfig CranArqConfig;

typedef struct CranArqMetrics {
  double throughput;
  /**
   * Meaningful only when `efficiency_defined` is nonzero.
   */
  double efficiency;
  bool efficiency_defined;
  double tx_fraction;
  uint64_t states;
  double residual;
} CranArqMetrics;

typedef struct CranArqSimResult {
  double throughput_mean;
  double throughput_stderr;
  double efficiency_mean;
  double efficiency_stderr;
  bool efficiency_defined;
  double tx_fraction;
  uint64_t slots;
  uint64_t warmup;
  uint64_t seed;
} CranArqSimResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *cran_arq_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *cran_arq_version(void);

/**
 * Parses a JSON configuration. On success `*out` owns a new handle.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum CranArqStatus cran_arq_config_from_json(const char *json, struct CranArqConfig **out);

/**
 * Configuration with default parameters. `protocol` and `architecture`
 * take `CranArqProtocol` and `CranArqArchitecture` values.
 *
 * # Safety
 * `out` must be writable.
 */
enum CranArqStatus cran_arq_config_new(uint32_t protocol,
                                       uint32_t architecture,
                                       struct CranArqConfig **out);

/**
 * Sets the average SIR in dB. The handle is unchanged on failure.
 *
 * # Safety
 * `cfg` must be a live handle.
 */
enum CranArqStatus cran_arq_config_set_sir_db(struct CranArqConfig *cfg, double sir_db);

/**
 * Sets the fronthaul delay; a window left at its default follows it.
 *
 * # Safety
 * `cfg` must be a live handle.
 */
enum CranArqStatus cran_arq_config_set_delta(struct CranArqConfig *cfg, uint32_t delta);

/**
 * # Safety
 * `cfg` must be null or a handle not yet freed.
 */
void cran_arq_config_free(struct CranArqConfig *cfg);

/**
 * Builds and solves the chain in one call.
 *
 * # Safety
 * `cfg` must be a live handle; `out` must be writable.
 */
enum CranArqStatus cran_arq_solve(const struct CranArqConfig *cfg, struct CranArqMetrics *out);

/**
 * # Safety
 * `cfg` must be a live handle; `out` must be writable.
 */
enum CranArqStatus cran_arq_chain_build(const struct CranArqConfig *cfg, struct CranArqChain **out);

/**
 * Number of reachable states, or 0 for a null handle.
 *
 * # Safety
 * `chain` must be null or a live handle.
 */
uint64_t cran_arq_chain_state_count(const struct CranArqChain *chain);

/**
 * # Safety
 * `chain` must be a live handle; `out` must be writable.
 */
enum CranArqStatus cran_arq_chain_solve(const struct CranArqChain *chain,
                                        struct CranArqMetrics *out);

/**
 * # Safety
 * `chain` must be null or a handle not yet freed.
 */
void cran_arq_chain_free(struct CranArqChain *chain);

/**
 * Monte Carlo estimate. `slots` and `warmup` of 0 select the defaults;
 * `continuous` selects the unquantized gain.
 *
 * # Safety
 * `cfg` must be a live handle; `out` must be writable.
 */
enum CranArqStatus cran_arq_simulate(const struct CranArqConfig *cfg,
                                     uint64_t seed,
                                     uint64_t slots,
                                     uint64_t warmup,
                                     bool continuous,
                                     struct CranArqSimResult *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CRAN_ARQ_H */
