/* C interface to the memchan correlated-dephasing capacity library. */

#ifndef MEMCHAN_H
#define MEMCHAN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every `memchan_*` call.
 */
typedef enum MemchanStatus {
  MEMCHAN_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  MEMCHAN_STATUS_NULL_POINTER = 1,
  /**
   * Arguments failed validation.
   */
  MEMCHAN_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The request exceeds the Hilbert-dimension cap.
   */
  MEMCHAN_STATUS_CAP_EXCEEDED = 3,
  /**
   * The environment is degenerate for the requested quantity.
   */
  MEMCHAN_STATUS_DEGENERATE = 4,
  /**
   * A numeric invariant failed.
   */
  MEMCHAN_STATUS_NUMERIC = 5,
  /**
   * The operation is not defined for this environment kind.
   */
  MEMCHAN_STATUS_UNSUPPORTED = 6,
} MemchanStatus;

/**
 * Opaque environment handle.
 */
typedef struct MemchanEnv MemchanEnv;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *memchan_version(void);

/**
 * Copies the last error message into `buf` (truncated to `cap` bytes,
 * always NUL-terminated when `cap > 0`). Returns the full message length.
 */
uintptr_t memchan_last_error_message(char *buf, uintptr_t cap);

/**
 * Ground-state family of the spin chain with a capacity transition at
 * `g = 0`.
 */
enum MemchanStatus memchan_env_wolf(double g, struct MemchanEnv **out);

/**
 * Classical Ising ring at inverse temperature `beta`.
 */
enum MemchanStatus memchan_env_ising(double coupling,
                                     double field,
                                     double beta,
                                     struct MemchanEnv **out);

/**
 * Markov chain from a row-major `states x states` row-stochastic matrix.
 * The stationary distribution is computed internally.
 */
enum MemchanStatus memchan_env_markov(const double *transition,
                                      uintptr_t states,
                                      struct MemchanEnv **out);

/**
 * Rank-1 MPS environment. Each matrix is 8 doubles: row-major 2x2 with
 * interleaved (re, im) entries.
 */
enum MemchanStatus memchan_env_mps(const double *q0, const double *q1, struct MemchanEnv **out);

/**
 * Releases an environment handle. Null is a no-op.
 */
void memchan_env_free(struct MemchanEnv *env);

/**
 * Transfer-matrix entropy rate (bits/site). Defined for wolf, mps and
 * ising environments.
 */
enum MemchanStatus memchan_rate_transfer(const struct MemchanEnv *env, double *rate);

/**
 * Thermodynamic entropy rate (bits/site): ising environments directly,
 * wolf/mps through their Ising image at `beta = 1`.
 */
enum MemchanStatus memchan_rate_thermo(const struct MemchanEnv *env, double *rate);

/**
 * Stationary entropy rate of a markov environment (bits/site).
 */
enum MemchanStatus memchan_rate_markov(const struct MemchanEnv *env, double *rate);

/**
 * Brute-force entropy rate from dephased diagonals at the given strictly
 * increasing ring sizes (at least 3 of them).
 */
enum MemchanStatus memchan_rate_brute(const struct MemchanEnv *env,
                                      const uintptr_t *sites,
                                      uintptr_t count,
                                      double *rate);

/**
 * Shannon entropy (bits) of the dephased diagonal on `sites` sites.
 */
enum MemchanStatus memchan_diagonal_entropy(const struct MemchanEnv *env,
                                            uintptr_t sites,
                                            double *entropy);

/**
 * Capacity `log2(levels) - rate`, floored at zero; `*floored` records
 * whether flooring happened.
 */
enum MemchanStatus memchan_capacity_from_rate(double rate,
                                              uint32_t levels,
                                              double *capacity,
                                              bool *floored);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MEMCHAN_H */
