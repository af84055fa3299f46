#ifndef GCDLCM_H
#define GCDLCM_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call.
 */
typedef enum GcdlcmStatus {
  GCDLCM_STATUS_OK = 0,
  GCDLCM_STATUS_INVALID_ARGUMENT = 1,
  GCDLCM_STATUS_DOMAIN = 2,
  GCDLCM_STATUS_RANGE = 3,
  GCDLCM_STATUS_RESOURCE = 4,
  GCDLCM_STATUS_NUMERIC = 5,
  GCDLCM_STATUS_CONSISTENCY = 6,
  GCDLCM_STATUS_NULL_POINTER = 7,
  GCDLCM_STATUS_PANIC = 8,
} GcdlcmStatus;

/**
 * Statistic selector for [`gcdlcm_law`].
 */
typedef enum GcdlcmStatistic {
  GCDLCM_STATISTIC_GCD_MASS = 0,
  GCDLCM_STATISTIC_GCD_MOMENT = 1,
  GCDLCM_STATISTIC_LCM_CDF = 2,
  GCDLCM_STATISTIC_LCM_MOMENT = 3,
  GCDLCM_STATISTIC_LCM_OVER_PRODUCT_CDF = 4,
  GCDLCM_STATISTIC_LCM_OVER_PRODUCT_MOMENT = 5,
  GCDLCM_STATISTIC_LOG_LCM_MEAN = 6,
} GcdlcmStatistic;

typedef enum GcdlcmSampled {
  GCDLCM_SAMPLED_GCD = 0,
  GCDLCM_SAMPLED_LCM_SCALED = 1,
  GCDLCM_SAMPLED_LCM_OVER_PRODUCT = 2,
  GCDLCM_SAMPLED_LOG_LCM_CENTERED = 3,
} GcdlcmSampled;

typedef enum GcdlcmFunctional {
  /**
   * Mean of `X^param`.
   */
  GCDLCM_FUNCTIONAL_POWER = 0,
  /**
   * Frequency of `X ≤ param`.
   */
  GCDLCM_FUNCTIONAL_AT_MOST = 1,
  /**
   * Frequency of `X = param`.
   */
  GCDLCM_FUNCTIONAL_EQUALS = 2,
} GcdlcmFunctional;

/**
 * Opaque coupon-class structure of `{1..n}`.
 */
typedef struct GcdlcmCouponStructure GcdlcmCouponStructure;

/**
 * Opaque sieve of primes, smallest prime factors and Möbius values.
 */
typedef struct GcdlcmPrimeTable GcdlcmPrimeTable;

/**
 * Law parameters; fields not used by the statistic are ignored.
 */
typedef struct GcdlcmLawQuery {
  enum GcdlcmStatistic statistic;
  uint32_t r;
  uint64_t k;
  double t;
  uint32_t q;
  uint64_t n;
  double eps;
} GcdlcmLawQuery;

/**
 * Evaluated law: `lower == upper == exact` when `has_exact` is set.
 */
typedef struct GcdlcmLaw {
  double lower;
  double upper;
  double exact;
  bool has_exact;
} GcdlcmLaw;

typedef struct GcdlcmSamplerConfig {
  uint64_t n;
  uint32_t r;
  uint64_t samples;
  uint64_t seed;
  uint32_t workers;
} GcdlcmSamplerConfig;

/**
 * Monte Carlo estimate with its standard error.
 */
typedef struct GcdlcmEstimate {
  double value;
  double stderr;
  uint64_t samples;
} GcdlcmEstimate;

/**
 * The class of multiples of `p^gamma`, with `beta` members.
 */
typedef struct GcdlcmPrimeClass {
  uint64_t p;
  uint32_t gamma;
  uint64_t beta;
} GcdlcmPrimeClass;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null if none. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *gcdlcm_last_error_message(void);

/**
 * Clears the last failure message on this thread.
 */
void gcdlcm_clear_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *gcdlcm_version(void);

/**
 * `ζ(s)` for `s > 1`.
 */
enum GcdlcmStatus gcdlcm_zeta(double s, double eps, double *out);

/**
 * Density of pairwise coprime r-tuples.
 */
enum GcdlcmStatus gcdlcm_coprimality_constant(uint32_t r, double eps, double *out);

enum GcdlcmStatus gcdlcm_law(const struct GcdlcmLawQuery *query, struct GcdlcmLaw *out);

/**
 * `P(T_n > m)` for the gcd waiting time.
 */
enum GcdlcmStatus gcdlcm_gcd_wait_tail(uint64_t n, uint32_t m, double *out);

/**
 * `E(T_n)` for the gcd waiting time.
 */
enum GcdlcmStatus gcdlcm_gcd_wait_mean(uint64_t n, double *out);

/**
 * Limit of the gcd waiting-time mean through ζ values and through a
 * Möbius sum with `cutoff` terms.
 */
enum GcdlcmStatus gcdlcm_gcd_wait_mean_limit(double eps,
                                             uint64_t cutoff,
                                             double *zeta_side,
                                             double *mobius_side);

/**
 * `E(T_n)` for the lcm waiting time, by quadrature.
 */
enum GcdlcmStatus gcdlcm_lcm_wait_mean(uint64_t n, double eps, double *out);

enum GcdlcmStatus gcdlcm_lcm_wait_mean_bounds(uint64_t n, double *lower, double *upper);

/**
 * Mean of a functional of a tuple statistic over uniform samples.
 */
enum GcdlcmStatus gcdlcm_sample_statistic(const struct GcdlcmSamplerConfig *config,
                                          enum GcdlcmSampled statistic,
                                          enum GcdlcmFunctional functional,
                                          double param,
                                          struct GcdlcmEstimate *out);

/**
 * Simulated gcd waiting time; `tail` (may be null) receives `tail_len`
 * estimates of `P(T_n > m)` for `m = 0, 1, …`, at most 21.
 */
enum GcdlcmStatus gcdlcm_simulate_gcd_waiting(uint64_t n,
                                              uint64_t trials,
                                              uint64_t seed,
                                              uint32_t workers,
                                              struct GcdlcmEstimate *mean,
                                              struct GcdlcmEstimate *tail,
                                              size_t tail_len);

enum GcdlcmStatus gcdlcm_simulate_lcm_waiting(uint64_t n,
                                              uint64_t trials,
                                              uint64_t seed,
                                              uint32_t workers,
                                              struct GcdlcmEstimate *out);

enum GcdlcmStatus gcdlcm_prime_table_new(uint64_t limit, struct GcdlcmPrimeTable **out);

/**
 * Frees a table; null is accepted.
 */
void gcdlcm_prime_table_free(struct GcdlcmPrimeTable *table);

enum GcdlcmStatus gcdlcm_prime_table_limit(const struct GcdlcmPrimeTable *table, uint64_t *out);

/**
 * `π(x)` for `x` up to the table limit.
 */
enum GcdlcmStatus gcdlcm_prime_table_prime_count(const struct GcdlcmPrimeTable *table,
                                                 uint64_t x,
                                                 uint64_t *out);

enum GcdlcmStatus gcdlcm_prime_table_mobius(const struct GcdlcmPrimeTable *table,
                                            uint64_t m,
                                            int8_t *out);

enum GcdlcmStatus gcdlcm_prime_table_is_prime(const struct GcdlcmPrimeTable *table,
                                              uint64_t m,
                                              bool *out);

/**
 * Borrowed view of the primes in increasing order, valid while the table
 * lives.
 */
enum GcdlcmStatus gcdlcm_prime_table_primes(const struct GcdlcmPrimeTable *table,
                                            const uint32_t **primes,
                                            size_t *len);

enum GcdlcmStatus gcdlcm_coupon_structure_new(uint64_t n, struct GcdlcmCouponStructure **out);

/**
 * Frees a structure; null is accepted.
 */
void gcdlcm_coupon_structure_free(struct GcdlcmCouponStructure *s);

/**
 * Number of classes, i.e. `π(n)`.
 */
enum GcdlcmStatus gcdlcm_coupon_structure_class_count(const struct GcdlcmCouponStructure *s,
                                                      uint64_t *out);

/**
 * Class `index` in increasing prime order.
 */
enum GcdlcmStatus gcdlcm_coupon_structure_class(const struct GcdlcmCouponStructure *s,
                                                uint64_t index,
                                                struct GcdlcmPrimeClass *out);

/**
 * `ω_j(n)`: how many classes have exactly `j` members.
 */
enum GcdlcmStatus gcdlcm_coupon_structure_omega(const struct GcdlcmCouponStructure *s,
                                                uint64_t j,
                                                uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GCDLCM_H */
