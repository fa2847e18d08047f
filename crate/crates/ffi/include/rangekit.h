#ifndef RANGEKIT_H
#define RANGEKIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RkStatus {
  RK_STATUS_OK = 0,
  RK_STATUS_NULL_POINTER = 1,
  RK_STATUS_INVALID_PARAMETER = 2,
  RK_STATUS_OUT_OF_RANGE = 3,
  RK_STATUS_FORMAT = 4,
  RK_STATUS_BUFFER_TOO_SMALL = 5,
  RK_STATUS_LOGIC = 6,
  RK_STATUS_PANIC = 7,
} RkStatus;

/**
 * Rank function of a fixed-rank selector.
 */
typedef enum RkRankKind {
  /**
   * `ceil(s/2)`
   */
  RK_RANK_KIND_MEDIAN = 0,
  RK_RANK_KIND_MIN = 1,
  RK_RANK_KIND_MAX = 2,
  /**
   * `min(k, s)`
   */
  RK_RANK_KIND_CONST = 3,
} RkRankKind;

typedef struct RkDynamicMode RkDynamicMode;

typedef struct RkFixedSelect RkFixedSelect;

typedef struct RkOnlineSelect RkOnlineSelect;

typedef struct RkStaticMode RkStaticMode;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `cap`) and returns its full length including the NUL.
 *
 * # Safety
 * `buf` must be null or valid for `cap` bytes.
 */
size_t rk_last_error(char *buf, size_t cap);

/**
 * # Safety
 * `colors` must be valid for `n` values; `out` must be writable.
 */
enum RkStatus rk_static_build(const uint64_t *colors,
                              size_t n,
                              double epsilon,
                              struct RkStaticMode **out);

/**
 * Position of an approximate mode of `[a, b]`.
 *
 * # Safety
 * `h` must come from this library; `out_pos` must be writable.
 */
enum RkStatus rk_static_query(const struct RkStaticMode *h, size_t a, size_t b, size_t *out_pos);

/**
 * # Safety
 * `h` must come from this library; `out_bits` must be writable.
 */
enum RkStatus rk_static_space_bits(const struct RkStaticMode *h, size_t *out_bits);

/**
 * Serializes into `buf`. With a short buffer, returns
 * `RK_STATUS_BUFFER_TOO_SMALL` and still sets `out_len`.
 *
 * # Safety
 * `buf` must be valid for `cap` bytes; `out_len` must be writable.
 */
enum RkStatus rk_static_serialize(const struct RkStaticMode *h,
                                  uint8_t *buf,
                                  size_t cap,
                                  size_t *out_len);

/**
 * # Safety
 * `bytes` must be valid for `len` bytes; `out` must be writable.
 */
enum RkStatus rk_static_deserialize(const uint8_t *bytes, size_t len, struct RkStaticMode **out);

/**
 * # Safety
 * `h` must be null or come from this library, and not be used afterwards.
 */
void rk_static_free(struct RkStaticMode *h);

/**
 * `k` is used only with `RK_RANK_KIND_CONST`.
 *
 * # Safety
 * `colors` must be valid for `n` values; `out` must be writable.
 */
enum RkStatus rk_fixed_build(const uint64_t *colors,
                             size_t n,
                             double alpha,
                             enum RkRankKind kind,
                             size_t k,
                             struct RkFixedSelect **out);

/**
 * # Safety
 * `h` must come from this library; `out_pos` must be writable.
 */
enum RkStatus rk_fixed_query(const struct RkFixedSelect *h, size_t a, size_t b, size_t *out_pos);

/**
 * # Safety
 * `h` must come from this library; `out_bits` must be writable.
 */
enum RkStatus rk_fixed_space_bits(const struct RkFixedSelect *h, size_t *out_bits);

/**
 * # Safety
 * As [`rk_static_serialize`].
 */
enum RkStatus rk_fixed_serialize(const struct RkFixedSelect *h,
                                 uint8_t *buf,
                                 size_t cap,
                                 size_t *out_len);

/**
 * # Safety
 * As [`rk_static_deserialize`].
 */
enum RkStatus rk_fixed_deserialize(const uint8_t *bytes, size_t len, struct RkFixedSelect **out);

/**
 * # Safety
 * As [`rk_static_free`].
 */
void rk_fixed_free(struct RkFixedSelect *h);

/**
 * # Safety
 * `colors` must be valid for `n` values; `out` must be writable.
 */
enum RkStatus rk_online_build(const uint64_t *colors,
                              size_t n,
                              double alpha,
                              struct RkOnlineSelect **out);

/**
 * Position of an approximate rank-`k` element of `[a, b]`.
 *
 * # Safety
 * `h` must come from this library; `out_pos` must be writable.
 */
enum RkStatus rk_online_query(const struct RkOnlineSelect *h,
                              size_t a,
                              size_t b,
                              size_t k,
                              size_t *out_pos);

/**
 * # Safety
 * `h` must come from this library; `out_bits` must be writable.
 */
enum RkStatus rk_online_space_bits(const struct RkOnlineSelect *h, size_t *out_bits);

/**
 * # Safety
 * As [`rk_static_serialize`].
 */
enum RkStatus rk_online_serialize(const struct RkOnlineSelect *h,
                                  uint8_t *buf,
                                  size_t cap,
                                  size_t *out_len);

/**
 * # Safety
 * As [`rk_static_deserialize`].
 */
enum RkStatus rk_online_deserialize(const uint8_t *bytes, size_t len, struct RkOnlineSelect **out);

/**
 * # Safety
 * As [`rk_static_free`].
 */
void rk_online_free(struct RkOnlineSelect *h);

/**
 * Empty structure; `n_hint` only sizes tables.
 *
 * # Safety
 * `out` must be writable.
 */
enum RkStatus rk_dynamic_new(double epsilon, size_t n_hint, struct RkDynamicMode **out);

/**
 * Inserts `color` so that it lands at position `pos`.
 *
 * # Safety
 * `h` must come from this library.
 */
enum RkStatus rk_dynamic_insert(struct RkDynamicMode *h, size_t pos, uint64_t color);

/**
 * Removes position `pos`; `out_color` may be null.
 *
 * # Safety
 * `h` must come from this library; `out_color` must be null or writable.
 */
enum RkStatus rk_dynamic_delete(struct RkDynamicMode *h, size_t pos, uint64_t *out_color);

/**
 * Position and color of an approximate mode of `[a, b]`.
 *
 * # Safety
 * `h` must come from this library; both outputs must be writable.
 */
enum RkStatus rk_dynamic_query(struct RkDynamicMode *h,
                               size_t a,
                               size_t b,
                               size_t *out_pos,
                               uint64_t *out_color);

/**
 * # Safety
 * `h` must come from this library; `out_len` must be writable.
 */
enum RkStatus rk_dynamic_len(const struct RkDynamicMode *h, size_t *out_len);

/**
 * # Safety
 * As [`rk_static_free`].
 */
void rk_dynamic_free(struct RkDynamicMode *h);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RANGEKIT_H */
