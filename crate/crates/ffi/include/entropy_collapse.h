#ifndef ENTROPY_COLLAPSE_H
#define ENTROPY_COLLAPSE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EclStatus {
  ECL_STATUS_OK = 0,
  ECL_STATUS_NULL_POINTER = 1,
  ECL_STATUS_INVALID_ARGUMENT = 2,
  ECL_STATUS_INVALID_DIMENSION = 3,
  ECL_STATUS_DEGENERATE = 4,
  ECL_STATUS_IO = 5,
  ECL_STATUS_PANIC = 6,
} EclStatus;

typedef enum EclRule {
  ECL_RULE_MULTIPLICATIVE = 0,
  ECL_RULE_SOFTMAX = 1,
  ECL_RULE_REPLICATOR = 2,
} EclRule;

/**
 * A point on the probability simplex.
 */
typedef struct EclDistribution EclDistribution;

/**
 * Per-step summaries of one evolved trajectory.
 */
typedef struct EclTrajectory EclTrajectory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *ecl_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ecl_version(void);

/**
 * Uniform distribution over `n` states.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum EclStatus ecl_distribution_uniform(size_t n, struct EclDistribution **out);

/**
 * Flat Dirichlet draw from the stream `(seed, stream)`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum EclStatus ecl_distribution_dirichlet(size_t n,
                                          uint64_t seed,
                                          uint64_t stream,
                                          struct EclDistribution **out);

/**
 * Copy `n` probabilities into a new distribution. They must already sum to one.
 *
 * # Safety
 * `probs` must point to `n` readable doubles and `out` to writable storage
 * for one handle.
 */
enum EclStatus ecl_distribution_from_probs(const double *probs,
                                           size_t n,
                                           struct EclDistribution **out);

/**
 * # Safety
 * `d` must be NULL or a handle from this library that has not been freed.
 */
void ecl_distribution_free(struct EclDistribution *d);

/**
 * Number of states, or 0 for NULL.
 *
 * # Safety
 * `d` must be NULL or a live handle.
 */
size_t ecl_distribution_len(const struct EclDistribution *d);

/**
 * Copy the probabilities into `buf`, which must hold exactly `len` doubles.
 *
 * # Safety
 * `d` must be a live handle and `buf` must point to `len` writable doubles.
 */
enum EclStatus ecl_distribution_probs(const struct EclDistribution *d, double *buf, size_t len);

/**
 * Entropy in nats: Shannon when `q == 1`, Rényi of order `q` otherwise.
 *
 * # Safety
 * `d` must be a live handle and `out` a writable double.
 */
enum EclStatus ecl_entropy(const struct EclDistribution *d, double q, double *out);

/**
 * Evolve `p0` for `horizon` steps with constant β. Noise (if `sigma > 0`)
 * draws from the stream `(seed, stream)`.
 *
 * # Safety
 * `p0` must be a live handle and `out` writable storage for one handle.
 */
enum EclStatus ecl_evolve(const struct EclDistribution *p0,
                          double alpha,
                          double beta,
                          enum EclRule rule,
                          double sigma,
                          size_t horizon,
                          uint64_t seed,
                          uint64_t stream,
                          struct EclTrajectory **out);

/**
 * # Safety
 * `t` must be NULL or a handle from this library that has not been freed.
 */
void ecl_trajectory_free(struct EclTrajectory *t);

/**
 * Number of recorded steps (horizon + 1), or 0 for NULL.
 *
 * # Safety
 * `t` must be NULL or a live handle.
 */
size_t ecl_trajectory_len(const struct EclTrajectory *t);

/**
 * Copy the normalized Shannon entropy per step into `buf` (`len` doubles,
 * equal to `ecl_trajectory_len`).
 *
 * # Safety
 * `t` must be a live handle and `buf` must point to `len` writable doubles.
 */
enum EclStatus ecl_trajectory_entropy_norm(const struct EclTrajectory *t, double *buf, size_t len);

/**
 * Final state of the trajectory as a new distribution handle.
 *
 * # Safety
 * `t` must be a live handle and `out` writable storage for one handle.
 */
enum EclStatus ecl_trajectory_final_state(const struct EclTrajectory *t,
                                          struct EclDistribution **out);

/**
 * Write the trajectory CSV to the UTF-8 path `path`.
 *
 * # Safety
 * `t` must be a live handle and `path` a NUL-terminated string.
 */
enum EclStatus ecl_trajectory_write_csv(const struct EclTrajectory *t, const char *path);

/**
 * Normalized Shannon entropy of a distribution, or NaN for NULL.
 *
 * # Safety
 * `d` must be NULL or a live handle.
 */
double ecl_normalized_entropy(const struct EclDistribution *d);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ENTROPY_COLLAPSE_H */
