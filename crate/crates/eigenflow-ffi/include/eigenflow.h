#ifndef EIGENFLOW_H
#define EIGENFLOW_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum EfStatus {
  EF_STATUS_OK = 0,
  EF_STATUS_NULL_POINTER = 1,
  EF_STATUS_INVALID_UTF8 = 2,
  EF_STATUS_INVALID_INPUT = 3,
  EF_STATUS_LIPSCHITZ_OVERFLOW = 4,
  EF_STATUS_INTERNAL = 5,
  EF_STATUS_PANIC = 6,
} EfStatus;

/**
 * The outcome of an analysis.
 */
typedef struct EfResult EfResult;

/**
 * A sampled system: points, a self-map on their indices and a density
 * constant.
 */
typedef struct EfSample EfSample;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *ef_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ef_version(void);

/**
 * Parses a sample from its JSON representation.
 */
enum EfStatus ef_sample_from_json(const char *json, struct EfSample **out);

/**
 * Generates the noisy angle-doubling map on `n` circle points.
 */
enum EfStatus ef_sample_circle(size_t n, double sigma, uint64_t seed, struct EfSample **out);

/**
 * Number of points in the sample, or 0 for a null handle.
 */
size_t ef_sample_len(const struct EfSample *sample);

void ef_sample_free(struct EfSample *sample);

/**
 * Runs the analysis over `Z_prime`. The eigenvalues tested are every field
 * element for small primes and the detected candidates otherwise; pass
 * `theta <= 0` for the default significance fraction and `threads == 0`
 * for one thread.
 */
enum EfStatus ef_analyze(const struct EfSample *sample,
                         uint32_t prime,
                         double theta,
                         uint32_t threads,
                         struct EfResult **out);

/**
 * The full result as JSON. Release the string with [`ef_string_free`].
 */
char *ef_result_json(const struct EfResult *result);

/**
 * Number of significant intervals across all tested eigenvalues.
 */
size_t ef_result_significant_count(const struct EfResult *result);

/**
 * The `index`-th significant interval. Essential intervals report an
 * infinite death.
 */
enum EfStatus ef_result_significant(const struct EfResult *result,
                                    size_t index,
                                    uint32_t *t,
                                    double *birth,
                                    double *death);

void ef_result_free(struct EfResult *result);

void ef_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EIGENFLOW_H */
