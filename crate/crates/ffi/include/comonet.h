#ifndef COMONET_H
#define COMONET_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ComonetStatus {
  COMONET_STATUS_OK = 0,
  COMONET_STATUS_NULL_POINTER = 1,
  COMONET_STATUS_INVALID_UTF8 = 2,
  /**
   * Bad address, number, or out-of-range argument.
   */
  COMONET_STATUS_INVALID_ARGUMENT = 3,
  /**
   * The scenario failed to parse or validate.
   */
  COMONET_STATUS_INVALID_SCENARIO = 4,
  COMONET_STATUS_IO = 5,
  /**
   * The simulation itself failed.
   */
  COMONET_STATUS_RUN_FAILED = 6,
  COMONET_STATUS_PANIC = 7,
} ComonetStatus;

typedef enum ComonetFormat {
  COMONET_FORMAT_TABLE = 0,
  COMONET_FORMAT_CSV = 1,
} ComonetFormat;

/**
 * The result of one run.
 */
typedef struct ComonetReport ComonetReport;

/**
 * A validated scenario.
 */
typedef struct ComonetScenario ComonetScenario;

/**
 * Per-call figures. Undefined metrics are NaN; flags are 1 (pass),
 * 0 (fail) or -1 (undefined).
 */
typedef struct ComonetCallMetrics {
  double delay_ms;
  double jitter_ms;
  double loss;
  double setup_s;
  int8_t delay_ok;
  int8_t jitter_ok;
  int8_t loss_ok;
  /**
   * Non-zero if the call could not be established at all.
   */
  uint8_t failed;
  uint64_t packets_sent;
  uint64_t packets_played;
} ComonetCallMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or an empty string.
 * The pointer stays valid until the next library call on this thread.
 */
const char *comonet_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void comonet_string_free(char *s);

/**
 * Maps a ten-digit number under the default "07" plan to its dotted address.
 *
 * # Safety
 * `number` must be a nul-terminated string; `out` must be writable.
 */
enum ComonetStatus comonet_addr_encode(const char *number, char **out);

/**
 * Maps a dotted community address back to its phone number.
 *
 * # Safety
 * `address` must be a nul-terminated string; `out` must be writable.
 */
enum ComonetStatus comonet_addr_decode(const char *address, char **out);

/**
 * Reads and validates a scenario file.
 *
 * # Safety
 * `path` must be a nul-terminated string; `out` must be writable.
 */
enum ComonetStatus comonet_scenario_load(const char *path, struct ComonetScenario **out);

/**
 * Parses and validates scenario text.
 *
 * # Safety
 * `source` must be a nul-terminated string; `out` must be writable.
 */
enum ComonetStatus comonet_scenario_parse(const char *source, struct ComonetScenario **out);

/**
 * # Safety
 * `scenario` must come from this library and not have been freed.
 */
void comonet_scenario_free(struct ComonetScenario *scenario);

/**
 * Simulates `scenario` under `seed`.
 *
 * # Safety
 * `scenario` must be a live handle; `out` must be writable.
 */
enum ComonetStatus comonet_run(const struct ComonetScenario *scenario,
                               uint64_t seed,
                               struct ComonetReport **out);

/**
 * # Safety
 * `report` must be a live handle; `out` must be writable.
 */
enum ComonetStatus comonet_report_call_count(const struct ComonetReport *report, size_t *out);

/**
 * Figures for the call at `index`, in scenario order.
 *
 * # Safety
 * `report` must be a live handle; `out` must be writable.
 */
enum ComonetStatus comonet_report_call_metrics(const struct ComonetReport *report,
                                               size_t index,
                                               struct ComonetCallMetrics *out);

/**
 * Renders the report the way the command-line tool prints it.
 *
 * # Safety
 * `report` must be a live handle; `out` must be writable.
 */
enum ComonetStatus comonet_report_render(const struct ComonetReport *report,
                                         enum ComonetFormat format,
                                         char **out);

/**
 * # Safety
 * `report` must come from this library and not have been freed.
 */
void comonet_report_free(struct ComonetReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COMONET_H */
