#ifndef SCHUBLCI_H
#define SCHUBLCI_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SchublciStatus {
  SCHUBLCI_STATUS_OK = 0,
  SCHUBLCI_STATUS_PARSE = 1,
  SCHUBLCI_STATUS_NOT_LCI = 2,
  SCHUBLCI_STATUS_BUDGET = 3,
  SCHUBLCI_STATUS_SIZE = 4,
  SCHUBLCI_STATUS_RANGE = 5,
  SCHUBLCI_STATUS_NOT_ESSENTIAL = 6,
  SCHUBLCI_STATUS_PRECONDITION = 7,
  SCHUBLCI_STATUS_PATTERN = 8,
  SCHUBLCI_STATUS_FAMILY = 9,
  SCHUBLCI_STATUS_MINOR = 10,
  SCHUBLCI_STATUS_DIVISION = 11,
  SCHUBLCI_STATUS_DEGREE = 12,
  SCHUBLCI_STATUS_NULL_POINTER = 13,
  SCHUBLCI_STATUS_INVALID_UTF8 = 14,
  SCHUBLCI_STATUS_VERIFICATION_FAILED = 15,
  SCHUBLCI_STATUS_PANIC = 16,
} SchublciStatus;

/**
 * Inclusion level of the essential set.
 */
typedef enum SchublciLevel {
  SCHUBLCI_LEVEL_DBI = 0,
  SCHUBLCI_LEVEL_ADBI_ONLY = 1,
  SCHUBLCI_LEVEL_NEITHER = 2,
} SchublciLevel;

/**
 * Opaque permutation handle.
 */
typedef struct SchublciPerm SchublciPerm;

/**
 * Opaque classification report handle.
 */
typedef struct SchublciReport SchublciReport;

/**
 * Singularity flags of a classified permutation.
 */
typedef struct SchublciFlags {
  bool smooth;
  bool factorial;
  bool dbi;
  bool lci;
  bool matrix_schubert_lci;
} SchublciFlags;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Stable name of a status, e.g. `"E_NOT_LCI"`. The pointer is static.
 */
const char *schublci_status_name(enum SchublciStatus status);

/**
 * Message of the last failed call on this thread; empty after a success.
 * Valid until the next call on the same thread.
 */
const char *schublci_last_error(void);

/**
 * Parse one-line notation such as `"53241"` or `"10,2,1,3,4,5,6,7,8,9"`.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` writable.
 */
enum SchublciStatus schublci_perm_parse(const char *text, struct SchublciPerm **out);

/**
 * # Safety
 * `perm` must come from `schublci_perm_parse` and not be used afterwards.
 */
void schublci_perm_free(struct SchublciPerm *perm);

/**
 * Size `n` of the permutation, or 0 for a null handle.
 *
 * # Safety
 * `perm` must be null or a live handle.
 */
size_t schublci_perm_size(const struct SchublciPerm *perm);

/**
 * Coxeter length (number of inversions), or 0 for a null handle.
 *
 * # Safety
 * `perm` must be null or a live handle.
 */
size_t schublci_perm_length(const struct SchublciPerm *perm);

/**
 * # Safety
 * `perm` must be a live handle and `out` writable.
 */
enum SchublciStatus schublci_inclusion_level(const struct SchublciPerm *perm,
                                             enum SchublciLevel *out);

/**
 * Classify `perm`; the report is released with `schublci_report_free`.
 *
 * # Safety
 * `perm` must be a live handle and `out` writable.
 */
enum SchublciStatus schublci_classify(const struct SchublciPerm *perm, struct SchublciReport **out);

/**
 * # Safety
 * `report` must come from `schublci_classify` and not be used afterwards.
 */
void schublci_report_free(struct SchublciReport *report);

/**
 * # Safety
 * `report` must be a live handle and `out` writable.
 */
enum SchublciStatus schublci_report_flags(const struct SchublciReport *report,
                                          struct SchublciFlags *out);

/**
 * Full report, including certificates and the non-lci witness, as JSON.
 *
 * # Safety
 * `report` must be a live handle and `out` writable.
 */
enum SchublciStatus schublci_report_json(const struct SchublciReport *report, char **out);

/**
 * Number of minimal generators of the Schubert determinantal ideal.
 *
 * # Safety
 * `perm` must be a live handle and `out` writable.
 */
enum SchublciStatus schublci_minimal_generator_count(const struct SchublciPerm *perm, size_t *out);

/**
 * Minimal generators as JSON, one entry per minor.
 *
 * # Safety
 * `perm` must be a live handle and `out` writable.
 */
enum SchublciStatus schublci_minimal_generators_json(const struct SchublciPerm *perm, char **out);

/**
 * Run a verification suite by name. The JSON report is written to `out`
 * even when the suite finds failures, in which case the status is
 * `VerificationFailed`.
 *
 * # Safety
 * `suite` must be a valid NUL-terminated string and `out` writable.
 */
enum SchublciStatus schublci_verify(const char *suite,
                                    size_t max_n,
                                    size_t jobs,
                                    uint64_t seed,
                                    char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void schublci_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SCHUBLCI_H */
