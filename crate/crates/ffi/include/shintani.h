#ifndef SHINTANI_H
#define SHINTANI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ShintaniStatus {
  SHINTANI_STATUS_OK = 0,
  SHINTANI_STATUS_NULL_POINTER = 1,
  SHINTANI_STATUS_INVALID_UTF8 = 2,
  SHINTANI_STATUS_PARSE = 3,
  SHINTANI_STATUS_INVALID_INPUT = 4,
  SHINTANI_STATUS_UNSUPPORTED = 5,
  SHINTANI_STATUS_HYPOTHESIS = 6,
  SHINTANI_STATUS_NUMERICAL = 7,
  SHINTANI_STATUS_INTERNAL = 8,
  SHINTANI_STATUS_PANIC = 9,
} ShintaniStatus;

typedef enum ShintaniCommand {
  SHINTANI_COMMAND_PAIR = 0,
  SHINTANI_COMMAND_THETA = 1,
  SHINTANI_COMMAND_REGULATOR = 2,
  SHINTANI_COMMAND_REGULATOR_HAT = 3,
  SHINTANI_COMMAND_HAT_THETA = 4,
  SHINTANI_COMMAND_VERIFY = 5,
  SHINTANI_COMMAND_SUITE = 6,
} ShintaniCommand;

/**
 * A totally real number field.
 */
typedef struct ShintaniField ShintaniField;

/**
 * A JSON run report.
 */
typedef struct ShintaniReport ShintaniReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success. Owned by the library.
 */
const char *shintani_last_error(void);

/**
 * Field of a root of the monic polynomial with `len` coefficients, constant term first.
 * `place_order` may be null, otherwise it has `degree` entries.
 * `coeffs` must point to `len` values and `out` must be writable.
 */
enum ShintaniStatus shintani_field_new(const int64_t *coeffs,
                                       size_t len,
                                       const size_t *place_order,
                                       struct ShintaniField **out);

/**
 * `field` must come from `shintani_field_new` and not be used afterwards.
 */
void shintani_field_free(struct ShintaniField *field);

/**
 * `field` must be a live handle.
 */
size_t shintani_field_degree(const struct ShintaniField *field);

/**
 * Checks b₀ ≡ R̂_𝔮 for S = S_∞, T = {𝔮}, M = 𝔽_𝔮^× and v₀ = inf`v0`. On success `*equal`
 * is set and `*value` receives b₀ as a string to be released with `shintani_string_free`.
 * `field` must be a live handle, `q` a NUL-terminated prime label, `equal` and `value` writable.
 */
enum ShintaniStatus shintani_hat_verify(const struct ShintaniField *field,
                                        const char *q,
                                        size_t v0,
                                        bool *equal,
                                        char **value);

/**
 * Runs a `ShintaniCommand` on a TOML configuration (null for `Suite`). `seed < 0` keeps the configured seed.
 * A report is produced even when the computation fails; inspect its exit code.
 * `config` must be null or NUL-terminated; `out` must be writable.
 */
enum ShintaniStatus shintani_run(const char *config,
                                 uint32_t command,
                                 int64_t seed,
                                 struct ShintaniReport **out);

/**
 * JSON text of the report, owned by the report.
 * `report` must be a live handle.
 */
const char *shintani_report_json(const struct ShintaniReport *report);

/**
 * 0 on success, 1 on a mathematical violation, 2 on a usage or configuration error.
 * `report` must be a live handle.
 */
int32_t shintani_report_exit_code(const struct ShintaniReport *report);

/**
 * `report` must be a live handle.
 */
bool shintani_report_pass(const struct ShintaniReport *report);

/**
 * `report` must come from `shintani_run` and not be used afterwards.
 */
void shintani_report_free(struct ShintaniReport *report);

/**
 * `s` must come from this library and not be used afterwards.
 */
void shintani_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SHINTANI_H */
