#ifndef RPP_H
#define RPP_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result codes returned by every fallible function.
 */
typedef enum RppStatus {
  RPP_STATUS_OK = 0,
  RPP_STATUS_NULL_POINTER = 1,
  RPP_STATUS_INVALID_PARAM = 2,
  RPP_STATUS_INFEASIBLE = 3,
  RPP_STATUS_OUT_OF_RANGE = 4,
  RPP_STATUS_DIMENSION = 5,
  RPP_STATUS_DECODE_FAILURE = 6,
  RPP_STATUS_AMBIGUOUS = 7,
  RPP_STATUS_PARSE = 8,
  RPP_STATUS_BUFFER_TOO_SMALL = 9,
  RPP_STATUS_INTERNAL = 10,
} RppStatus;

/**
 * A two-dimensional robust positioning array.
 */
typedef struct RppArray2D RppArray2D;

/**
 * A one-dimensional robust positioning sequence.
 */
typedef struct RppSeq1D RppSeq1D;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *rpp_last_error_message(void);

/**
 * Builds the sequence for (d, m, nR).
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum RppStatus rpp_seq1d_new(size_t d, size_t m, size_t n_r, struct RppSeq1D **out);

/**
 * # Safety
 * `h` must come from [`rpp_seq1d_new`] and not be used afterwards. Null is ignored.
 */
void rpp_seq1d_free(struct RppSeq1D *h);

/**
 * Window length n, or 0 for a null handle.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
size_t rpp_seq1d_window_len(const struct RppSeq1D *h);

/**
 * Number of window positions as a decimal string.
 *
 * # Safety
 * `h` must be a live handle; `buf` must hold `cap` bytes.
 */
enum RppStatus rpp_seq1d_num_positions(const struct RppSeq1D *h, char *buf, size_t cap);

/**
 * Writes the n bits of the window starting at decimal position `pos`.
 *
 * # Safety
 * `h` must be a live handle, `pos` a NUL-terminated string and `out` hold `cap` bytes.
 */
enum RppStatus rpp_seq1d_window_at(const struct RppSeq1D *h,
                                   const char *pos,
                                   uint8_t *out,
                                   size_t cap);

/**
 * Locates a possibly corrupted window of `len` bits. The position is written
 * as a decimal string to `pos_buf`, the number of corrected errors to `errors`.
 *
 * # Safety
 * `bits` must hold `len` bytes, `pos_buf` `cap` bytes; `errors` may be null.
 */
enum RppStatus rpp_seq1d_locate(const struct RppSeq1D *h,
                                const uint8_t *bits,
                                size_t len,
                                char *pos_buf,
                                size_t cap,
                                size_t *errors);

/**
 * Builds the array for (d, m, n1, n2).
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum RppStatus rpp_array2d_new(size_t d, size_t m, size_t n1, size_t n2, struct RppArray2D **out);

/**
 * # Safety
 * `h` must come from [`rpp_array2d_new`] and not be used afterwards. Null is ignored.
 */
void rpp_array2d_free(struct RppArray2D *h);

/**
 * Window shape n1 x n2.
 *
 * # Safety
 * `h` must be a live handle; `n1` and `n2` valid writable pointers.
 */
enum RppStatus rpp_array2d_window_shape(const struct RppArray2D *h, size_t *n1, size_t *n2);

/**
 * Writes the n1*n2 window with top-left corner (row, col), row-major.
 *
 * # Safety
 * `h` must be a live handle, `row`/`col` NUL-terminated strings and `out` hold `cap` bytes.
 */
enum RppStatus rpp_array2d_window_at(const struct RppArray2D *h,
                                     const char *row,
                                     const char *col,
                                     uint8_t *out,
                                     size_t cap);

/**
 * Locates a possibly corrupted n1*n2 window given row-major.
 *
 * # Safety
 * `bits` must hold n1*n2 bytes, each buffer `cap` bytes; `errors` may be null.
 */
enum RppStatus rpp_array2d_locate(const struct RppArray2D *h,
                                  const uint8_t *bits,
                                  char *row_buf,
                                  char *col_buf,
                                  size_t cap,
                                  size_t *errors);

/**
 * Minimum Hamming distance between distinct length-n windows of a bit string.
 * Writes `SIZE_MAX` when there are fewer than two windows.
 *
 * # Safety
 * `bits` must hold `len` bytes and `out` be writable.
 */
enum RppStatus rpp_min_window_distance(const uint8_t *bits,
                                       size_t len,
                                       size_t n,
                                       bool cyclic,
                                       size_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RPP_H */
