#ifndef DELTAKIT_H
#define DELTAKIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DkStatus {
  DK_STATUS_OK = 0,
  DK_STATUS_NULL_POINTER = 1,
  DK_STATUS_INVALID_ARGUMENT = 2,
  DK_STATUS_PARSE_ERROR = 3,
  DK_STATUS_UNSUPPORTED = 4,
  DK_STATUS_LIMIT_EXCEEDED = 5,
  DK_STATUS_PANIC = 6,
} DkStatus;

/**
 * A finite abelian group.
 */
typedef struct DkGroup DkGroup;

/**
 * A T-block monoid read from a spec document.
 */
typedef struct DkTBlock DkTBlock;

/**
 * Region caps; a zero field keeps the spec or default value.
 */
typedef struct DkCaps {
  uint32_t seq_len_cap;
  uint32_t exp_cap;
} DkCaps;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success. Owned by the library.
 */
const char *dk_last_error_message(void);

/**
 * Group from invariant factors `n_1 | n_2 | ... | n_r`, each above 1.
 *
 * # Safety
 * `factors` must point to `len` values (or be null with `len == 0`); `out` must be writable.
 */
enum DkStatus dk_group_new(const uint32_t *factors, size_t len, struct DkGroup **out);

/**
 * Group `C_m1 + ... + C_mk` for arbitrary positive moduli, reduced to invariant factors.
 *
 * # Safety
 * As for [`dk_group_new`].
 */
enum DkStatus dk_group_canonicalize(const uint64_t *moduli, size_t len, struct DkGroup **out);

/**
 * # Safety
 * `group` must come from this library and not be used afterwards. Null is ignored.
 */
void dk_group_free(struct DkGroup *group);

/**
 * # Safety
 * `group` must be a live handle; `out` must be writable.
 */
enum DkStatus dk_group_order(const struct DkGroup *group, uint64_t *out);

/**
 * # Safety
 * As for [`dk_group_order`].
 */
enum DkStatus dk_group_exponent(const struct DkGroup *group, uint32_t *out);

/**
 * `1 + Σ (n_i - 1)`.
 *
 * # Safety
 * As for [`dk_group_order`].
 */
enum DkStatus dk_group_d_star(const struct DkGroup *group, uint32_t *out);

/**
 * Davenport constant, computed from the atoms of `B(G)`.
 *
 * # Safety
 * As for [`dk_group_order`].
 */
enum DkStatus dk_group_davenport(const struct DkGroup *group, uint32_t *out);

/**
 * Parses a spec document (JSON, UTF-8, NUL-terminated).
 *
 * # Safety
 * `json` must be a valid C string; `out` must be writable.
 */
enum DkStatus dk_tblock_from_json(const char *json, struct DkTBlock **out);

/**
 * # Safety
 * `tblock` must come from this library and not be used afterwards. Null is ignored.
 */
void dk_tblock_free(struct DkTBlock *tblock);

/**
 * Predicted maximum distance for a class group of order 2; `UNSUPPORTED` otherwise.
 *
 * # Safety
 * `tblock` must be a live handle; `out` must be writable.
 */
enum DkStatus dk_tblock_max_delta_prediction(const struct DkTBlock *tblock, uint32_t *out);

/**
 * Scans the monoid and writes a JSON array of reports to `*out_json`, to be released with
 * [`dk_string_free`]. `caps` may be null.
 *
 * # Safety
 * `tblock` must be a live handle; `caps` null or readable; `out_json` writable.
 */
enum DkStatus dk_tblock_scan_json(const struct DkTBlock *tblock,
                                  const struct DkCaps *caps,
                                  char **out_json);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards. Null is ignored.
 */
void dk_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DELTAKIT_H */
