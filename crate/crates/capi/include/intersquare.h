/* C interface for the intersquare library.
 * Generated by cbindgen from the Rust declarations; do not edit by hand.
 */

#ifndef INTERSQUARE_H
#define INTERSQUARE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call in this ABI.
 */
typedef enum IsqStatus {
  /**
   * The call succeeded and all out-parameters are populated.
   */
  IsqStatus_Ok = 0,
  /**
   * A required pointer argument was null.
   */
  IsqStatus_NullArgument = 1,
  /**
   * An argument was malformed or outside the supported domain.
   */
  IsqStatus_InvalidArgument = 2,
  /**
   * The computation ran but its mathematical claim failed
   * (a checked inequality did not hold, or a promised object
   * was not found).
   */
  IsqStatus_MathFailure = 3,
  /**
   * A configured work budget was exhausted before completion.
   */
  IsqStatus_ResourceExhausted = 4,
  /**
   * An internal panic was caught at the boundary.
   */
  IsqStatus_Panic = 5,
} IsqStatus;

/**
 * Opaque handle to one certified lower-bound evaluation.
 */
typedef struct IsqBoundReport IsqBoundReport;

/**
 * Exact inequality checks and (optional) search result for a
 * semiprime witness; see [`isq_semiprime_witness`].
 */
typedef struct IsqWitness {
  /**
   * The interval is longer than the prime-gap bound.
   */
  bool length_gt_gap_bound;
  /**
   * The right endpoint stays below the gap-record range limit.
   */
  bool endpoint_lt_gap_limit;
  /**
   * p·q landed strictly inside the target window (requires `search`).
   */
  bool product_in_window;
  /**
   * True when a prime q was searched for and found; the four halves
   * below are meaningful only in that case.
   */
  bool has_q;
  uint64_t q_hi;
  uint64_t q_lo;
  uint64_t product_hi;
  uint64_t product_lo;
} IsqWitness;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Returns the library version as a static NUL-terminated string.
 * The pointer is valid for the lifetime of the program and must not
 * be freed.
 */
const char *isq_version(void);

/**
 * Returns the message recorded by the most recent failing call on this
 * thread, or null when no failure has occurred. The pointer is
 * invalidated by the next call into the library on the same thread;
 * do not free it.
 */
const char *isq_last_error_message(void);

/**
 * Releases a string previously returned through a `char **`
 * out-parameter of this library. Null is accepted and ignored.
 *
 * # Safety
 *
 * `s` must be null or a pointer obtained from this library that has
 * not already been freed.
 */
void isq_string_free(char *s);

/**
 * Deterministic primality test for `value = value_hi · 2⁶⁴ + value_lo`.
 * Writes true/false to `out_is_prime`; values 0 and 1 test false.
 *
 * # Safety
 *
 * `out_is_prime` must be valid for writes.
 */
enum IsqStatus isq_is_prime(uint64_t value_hi, uint64_t value_lo, bool *out_is_prime);

/**
 * Factors `value = value_hi · 2⁶⁴ + value_lo` (must be ≥ 1) into
 * `(prime, exponent)` pairs in increasing prime order. Primes are
 * written as hi/lo halves into `primes_hi`/`primes_lo`, exponents into
 * `exponents`; all three arrays must hold at least `capacity` entries.
 *
 * `out_len` always receives the number of distinct primes (at most 26
 * for any 128-bit value), even when `capacity` is too small — call
 * once with `capacity = 0` to size the buffers, then again to fill
 * them. Returns `InvalidArgument` on a short buffer and
 * `ResourceExhausted` if the factoring budget runs out.
 *
 * # Safety
 *
 * `out_len` must be valid for writes; `primes_hi`, `primes_lo`, and
 * `exponents` must be valid for `capacity` writes each (they are
 * ignored when `capacity` is 0).
 */
enum IsqStatus isq_factorize(uint64_t value_hi,
                             uint64_t value_lo,
                             uint64_t *primes_hi,
                             uint64_t *primes_lo,
                             uint32_t *exponents,
                             uintptr_t capacity,
                             uintptr_t *out_len);

/**
 * Finds the least prime-factor count Ω over the open interval
 * (n², (n+1)²) for `n ≥ 1`, together with a witness attaining it.
 * The witness is written as hi/lo halves.
 *
 * # Safety
 *
 * `out_omega`, `out_witness_hi`, and `out_witness_lo` must be valid
 * for writes.
 */
enum IsqStatus isq_min_omega_in_interval(uint64_t n,
                                         uint32_t *out_omega,
                                         uint64_t *out_witness_hi,
                                         uint64_t *out_witness_lo);

/**
 * Searches the open interval (n², (n+1)²) for an integer with at most
 * `k` prime factors counted with multiplicity (`n ≥ 1`, `k ≥ 1`).
 * Writes whether one exists to `out_found` and, if so, the smallest
 * such integer as hi/lo halves (zeroed otherwise).
 *
 * # Safety
 *
 * `out_found`, `out_value_hi`, and `out_value_lo` must be valid for
 * writes.
 */
enum IsqStatus isq_find_almost_prime(uint64_t n,
                                     uint32_t k,
                                     bool *out_found,
                                     uint64_t *out_value_hi,
                                     uint64_t *out_value_lo);

/**
 * Computes the largest gap between consecutive primes that both lie
 * below `x` (`x ≥ 5`), writing the gap and the prime that starts it.
 *
 * # Safety
 *
 * `out_gap` and `out_start` must be valid for writes.
 */
enum IsqStatus isq_max_gap_below(uint64_t x, uint64_t *out_gap, uint64_t *out_start);

/**
 * Checks (and optionally completes) a semiprime witness for the
 * interval (n², (n+1)²): verifies with exact rational arithmetic that
 * the subinterval I = (n²/p, (n+1)²/p) is longer than `gap_bound` and
 * ends below `gap_limit = gap_limit_hi · 2⁶⁴ + gap_limit_lo`, and —
 * when `search` is true — finds the least prime q in I and confirms
 * p·q lands strictly inside the window.
 *
 * `p` must be prime (`InvalidArgument` otherwise). A failed inequality
 * or a missing prime reports `MathFailure`; an exhausted search budget
 * reports `ResourceExhausted`.
 *
 * # Safety
 *
 * `out` must be valid for writes.
 */
enum IsqStatus isq_semiprime_witness(uint64_t n,
                                     uint64_t p,
                                     uint64_t gap_bound,
                                     uint64_t gap_limit_hi,
                                     uint64_t gap_limit_lo,
                                     bool search,
                                     struct IsqWitness *out);

/**
 * Evaluates the certified lower-bound chain at `N` (a NUL-terminated
 * decimal such as `"1e31"`, `"10^31"`, or plain digits; `N ≥ 10³¹`)
 * for sieve parameters `(k1, k2, alpha, s)`, leaving every other
 * parameter at its reference value. On success writes an owned handle
 * to `out_report`; release it with [`isq_bound_report_free`].
 *
 * Inadmissible parameters and out-of-range `N` report
 * `InvalidArgument`. An uncertified (non-positive) margin is not an
 * error: inspect [`isq_bound_report_certified`].
 *
 * # Safety
 *
 * `n_decimal` must point to a NUL-terminated string; `out_report` must
 * be valid for writes.
 */
enum IsqStatus isq_bound_report_new(const char *n_decimal,
                                    double k1,
                                    double k2,
                                    double alpha,
                                    double s,
                                    struct IsqBoundReport **out_report);

/**
 * Writes the two-sided enclosure of the certified margin.
 *
 * # Safety
 *
 * `report` must be a live handle from [`isq_bound_report_new`];
 * `out_lo` and `out_hi` must be valid for writes.
 */
enum IsqStatus isq_bound_report_margin(const struct IsqBoundReport *report,
                                       double *out_lo,
                                       double *out_hi);

/**
 * Writes whether the report certifies a strictly positive margin.
 *
 * # Safety
 *
 * `report` must be a live handle; `out_certified` must be valid for
 * writes.
 */
enum IsqStatus isq_bound_report_certified(const struct IsqBoundReport *report, bool *out_certified);

/**
 * Looks up one named report field and writes its enclosure. Valid
 * names are `S_lower_scaled`, `weighted_sum_upper_scaled`,
 * `q0_remainder_scaled`, `M1_scaled`, `M2_scaled`, `E_scaled`,
 * `prefactor`, and `margin`.
 *
 * # Safety
 *
 * `report` must be a live handle; `name` must point to a
 * NUL-terminated string; `out_lo` and `out_hi` must be valid for
 * writes.
 */
enum IsqStatus isq_bound_report_field(const struct IsqBoundReport *report,
                                      const char *name,
                                      double *out_lo,
                                      double *out_hi);

/**
 * Serializes the full report as a JSON document (parameters, every
 * field with its enclosure and defining expression, the margin, and
 * the certification flags). The returned string is owned by the
 * caller; release it with [`isq_string_free`].
 *
 * # Safety
 *
 * `report` must be a live handle; `out_json` must be valid for
 * writes.
 */
enum IsqStatus isq_bound_report_to_json(const struct IsqBoundReport *report, char **out_json);

/**
 * Releases a report handle. Null is accepted and ignored.
 *
 * # Safety
 *
 * `report` must be null or a live handle from
 * [`isq_bound_report_new`] that has not already been freed.
 */
void isq_bound_report_free(struct IsqBoundReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* INTERSQUARE_H */
