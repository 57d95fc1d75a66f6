#ifndef HULLCENSUS_H
#define HULLCENSUS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum HcStatus {
  HC_STATUS_OK = 0,
  /**
   * Parameters outside the operation's domain.
   */
  HC_STATUS_DOMAIN = 1,
  /**
   * An exact division left a remainder.
   */
  HC_STATUS_INTEGRALITY = 2,
  /**
   * The next count is zero, so the ratio is undefined.
   */
  HC_STATUS_DEGENERATE_RATIO = 3,
  /**
   * The request exceeds a resource guard.
   */
  HC_STATUS_GUARD = 4,
  HC_STATUS_UNSUPPORTED = 5,
  /**
   * Two computations of the same quantity disagreed.
   */
  HC_STATUS_MISMATCH = 6,
  HC_STATUS_NULL_POINTER = 7,
  HC_STATUS_BUFFER_TOO_SMALL = 8,
  HC_STATUS_IO = 9,
  HC_STATUS_PANIC = 10,
} HcStatus;

typedef enum HcMethod {
  /**
   * Product formula chosen by the parity of q.
   */
  HC_METHOD_AUTO = 0,
  HC_METHOD_SENDRIER = 1,
  HC_METHOD_PRODUCT = 2,
  HC_METHOD_BRUTE = 3,
} HcMethod;

/**
 * A linear code.
 */
typedef struct HcCode HcCode;

/**
 * Counts of [n, k]_q codes by hull dimension.
 */
typedef struct HcSpectrum HcSpectrum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call into this library on the
 * same thread.
 */
const char *hc_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *hc_version(void);

/**
 * Number of [n, k]_q codes with hull dimension l, as a decimal string.
 *
 * # Safety
 * `buf` must be valid for `cap` bytes; `needed` may be NULL.
 */
enum HcStatus hc_count(uint32_t n,
                       uint32_t k,
                       uint32_t l,
                       uint32_t q,
                       enum HcMethod method,
                       char *buf,
                       size_t cap,
                       size_t *needed);

/**
 * Computes the hull spectrum of [n, k]_q codes.
 *
 * # Safety
 * `out` must be a valid pointer; on success it receives a handle to free
 * with [`hc_spectrum_free`].
 */
enum HcStatus hc_spectrum(uint32_t n,
                          uint32_t k,
                          uint32_t q,
                          enum HcMethod method,
                          struct HcSpectrum **out);

/**
 * Number of entries (k + 1) in a spectrum; 0 for NULL.
 *
 * # Safety
 * `s` must be NULL or a live spectrum handle.
 */
size_t hc_spectrum_len(const struct HcSpectrum *s);

/**
 * Entry l of a spectrum as a decimal string.
 *
 * # Safety
 * `s` must be a live spectrum handle, `buf` valid for `cap` bytes; `needed`
 * may be NULL.
 */
enum HcStatus hc_spectrum_count(const struct HcSpectrum *s,
                                size_t l,
                                char *buf,
                                size_t cap,
                                size_t *needed);

/**
 * # Safety
 * `s` must be NULL or a handle from [`hc_spectrum`] not yet freed.
 */
void hc_spectrum_free(struct HcSpectrum *s);

/**
 * The exact ratio A_l / A_(l+1) as "numerator/denominator".
 *
 * # Safety
 * `buf` must be valid for `cap` bytes; `needed` may be NULL.
 */
enum HcStatus hc_ratio(uint32_t n,
                       uint32_t k,
                       uint32_t l,
                       uint32_t q,
                       char *buf,
                       size_t cap,
                       size_t *needed);

/**
 * The floor of A_l / A_(l+1) as a decimal string.
 *
 * # Safety
 * `buf` must be valid for `cap` bytes; `needed` may be NULL.
 */
enum HcStatus hc_mu(uint32_t n,
                    uint32_t k,
                    uint32_t l,
                    uint32_t q,
                    char *buf,
                    size_t cap,
                    size_t *needed);

/**
 * Builds the code spanned by the rows of a k x n generator matrix over
 * GF(q). Entries are row-major integers in 0..q (polynomial-basis
 * encoding). Dependent rows are allowed; the dimension is the rank.
 *
 * # Safety
 * `entries` must be valid for k * n bytes (it may be NULL when k * n = 0);
 * `out` must be a valid pointer.
 */
enum HcStatus hc_code_new(uint32_t q,
                          size_t k,
                          size_t n,
                          const uint8_t *entries,
                          struct HcCode **out);

/**
 * Parses a code from rows of digits separated by ';' or newlines, for
 * example "1100;0011".
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum HcStatus hc_code_parse(uint32_t q, const char *text, struct HcCode **out);

/**
 * # Safety
 * `c` must be NULL or a code handle not yet freed.
 */
void hc_code_free(struct HcCode *c);

/**
 * Length, or 0 for NULL.
 *
 * # Safety
 * `c` must be NULL or a live code handle.
 */
size_t hc_code_length(const struct HcCode *c);

/**
 * Dimension, or 0 for NULL.
 *
 * # Safety
 * `c` must be NULL or a live code handle.
 */
size_t hc_code_dimension(const struct HcCode *c);

/**
 * # Safety
 * `c` must be a live code handle; `out` must be a valid pointer.
 */
enum HcStatus hc_code_hull_dimension(const struct HcCode *c, size_t *out);

/**
 * The Euclidean dual, as a new handle.
 *
 * # Safety
 * `c` must be a live code handle; `out` must be a valid pointer.
 */
enum HcStatus hc_code_dual(const struct HcCode *c, struct HcCode **out);

/**
 * Minimum distance; -1 for the zero code.
 *
 * # Safety
 * `c` must be a live code handle; `out` must be a valid pointer.
 */
enum HcStatus hc_code_min_distance(const struct HcCode *c, int64_t *out);

/**
 * Minimum distance of the dual; -1 when the dual is the zero code.
 *
 * # Safety
 * `c` must be a live code handle; `out` must be a valid pointer.
 */
enum HcStatus hc_code_dual_distance(const struct HcCode *c, int64_t *out);

/**
 * Whether every codeword has even weight (binary codes only).
 *
 * # Safety
 * `c` must be a live code handle; `out` must be a valid pointer.
 */
enum HcStatus hc_code_is_even(const struct HcCode *c, bool *out);

/**
 * # Safety
 * `c` must be a live code handle; `out` must be a valid pointer.
 */
enum HcStatus hc_code_is_self_orthogonal(const struct HcCode *c, bool *out);

/**
 * # Safety
 * `c` must be a live code handle; `out` must be a valid pointer.
 */
enum HcStatus hc_code_is_lcd(const struct HcCode *c, bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HULLCENSUS_H */
