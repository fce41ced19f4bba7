#ifndef DEBRUIJN_H
#define DEBRUIJN_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes.
 */
typedef enum DbsStatus {
  DBS_STATUS_OK = 0,
  DBS_STATUS_NULL_POINTER = 1,
  DBS_STATUS_INVALID_SPEC = 2,
  DBS_STATUS_INVALID_ARGUMENT = 3,
  DBS_STATUS_NOT_DE_BRUIJN = 4,
  DBS_STATUS_BUDGET_EXCEEDED = 5,
  DBS_STATUS_BUFFER_TOO_SMALL = 6,
  DBS_STATUS_PANIC = 7,
} DbsStatus;

/**
 * A compiled rule. Create with `dbs_rule_from_json`, release with `dbs_rule_free`.
 */
typedef struct DbsRule DbsRule;

/**
 * A bit stream owning a copy of its rule.
 */
typedef struct DbsStream DbsStream;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses and validates a JSON rule spec `{"n":..,"family":..,"params":{..}}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum DbsStatus dbs_rule_from_json(const char *json, struct DbsRule **out);

/**
 * # Safety
 * `rule` must come from `dbs_rule_from_json` and not be freed twice. Null is ignored.
 */
void dbs_rule_free(struct DbsRule *rule);

/**
 * Order `n` of the rule, or 0 for a null handle.
 *
 * # Safety
 * `rule` must be null or a live handle.
 */
uint32_t dbs_rule_order(const struct DbsRule *rule);

/**
 * Successor bit of `state`, whose bit `n - 1` is the oldest stage.
 *
 * # Safety
 * `rule` must be a live handle and `out` a valid pointer.
 */
enum DbsStatus dbs_rule_next_bit(const struct DbsRule *rule, uint64_t state, uint8_t *out);

/**
 * Writes one period (`2^n` bytes of 0 or 1) starting at `start` into `buf`.
 *
 * `written` receives the period length; if `len` is too small nothing else is written
 * and `DBS_STATUS_BUFFER_TOO_SMALL` is returned.
 *
 * # Safety
 * `buf` must hold `len` bytes; `rule` and `written` must be valid.
 */
enum DbsStatus dbs_generate(const struct DbsRule *rule,
                            uint64_t start,
                            uint8_t *buf,
                            size_t len,
                            size_t *written);

/**
 * Opens a stream at `start`. The stream keeps its own copy of the rule.
 *
 * # Safety
 * `rule` must be a live handle and `out` a valid pointer.
 */
enum DbsStatus dbs_stream_new(const struct DbsRule *rule, uint64_t start, struct DbsStream **out);

/**
 * Fills `buf` with the next `len` bits.
 *
 * # Safety
 * `stream` must be a live handle and `buf` must hold `len` bytes.
 */
enum DbsStatus dbs_stream_next(struct DbsStream *stream, uint8_t *buf, size_t len);

/**
 * Current register state of the stream.
 *
 * # Safety
 * `stream` must be null or a live handle.
 */
uint64_t dbs_stream_state(const struct DbsStream *stream);

/**
 * # Safety
 * `stream` must come from `dbs_stream_new` and not be freed twice. Null is ignored.
 */
void dbs_stream_free(struct DbsStream *stream);

/**
 * Sets `*out` to whether `bits[0..len]` (bytes of 0 or 1) is a de Bruijn sequence of order `n`.
 *
 * # Safety
 * `bits` must hold `len` bytes and `out` must be valid.
 */
enum DbsStatus dbs_verify(const uint8_t *bits, size_t len, uint32_t n, bool *out);

/**
 * Copy of the calling thread's last error message, or null if there is none.
 * Release with `dbs_free_string`.
 */
char *dbs_last_error_message(void);

/**
 * # Safety
 * `s` must come from this library and not be freed twice. Null is ignored.
 */
void dbs_free_string(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DEBRUIJN_H */
