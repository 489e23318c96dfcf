#ifndef SYNCLCS_H
#define SYNCLCS_H

#pragma once

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status codes. Values 0 to 4 match the command-line exit codes.
 */
typedef enum SlcsStatus {
  SLCS_STATUS_OK = 0,
  /*
   A residual or verdict check failed; the report is still produced.
   */
  SLCS_STATUS_CHECK_FAILED = 1,
  /*
   The input is well-formed but invalid (non-prime modulus, shapes,
   non-solution).
   */
  SLCS_STATUS_INVALID = 2,
  /*
   Malformed JSON, unknown names, I/O.
   */
  SLCS_STATUS_PARSE = 3,
  /*
   Enumeration cap or search budget exceeded.
   */
  SLCS_STATUS_BUDGET = 4,
  SLCS_STATUS_NULL_POINTER = 5,
  /*
   A string argument was not valid UTF-8.
   */
  SLCS_STATUS_UTF8 = 6,
  /*
   An internal panic was caught at the boundary.
   */
  SLCS_STATUS_PANIC = 7,
} SlcsStatus;

/*
 An immutable linear system `A x = b` over Z_p.
 */
typedef struct SlcsSystem SlcsSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Parses a system from its JSON form `{"p": .., "A": [[..]], "b": [..]}`.
 Systems failing validation are rejected with `SLCS_STATUS_INVALID`.

 # Safety
 `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum SlcsStatus slcs_system_from_json(const char *json, struct SlcsSystem **out);

/*
 Creates a built-in system: `magic-square`, `one-eq` or `p3-demo`.

 # Safety
 `name` must be a nul-terminated string and `out` a valid pointer.
 */
enum SlcsStatus slcs_system_builtin(const char *name, struct SlcsSystem **out);

/*
 Releases a system. Null is ignored.

 # Safety
 `sys` must come from this library and not be used afterwards.
 */
void slcs_system_free(struct SlcsSystem *sys);

/*
 The modulus `p`, or 0 for a null handle.

 # Safety
 `sys` must be null or a live handle.
 */
uint32_t slcs_system_modulus(const struct SlcsSystem *sys);

/*
 Number of equations `m`, or 0 for a null handle.

 # Safety
 `sys` must be null or a live handle.
 */
size_t slcs_system_rows(const struct SlcsSystem *sys);

/*
 Number of variables `n`, or 0 for a null handle.

 # Safety
 `sys` must be null or a live handle.
 */
size_t slcs_system_cols(const struct SlcsSystem *sys);

/*
 Whether `A x = b` has a solution over Z_p.

 # Safety
 `sys` must be a live handle and `out` a valid pointer.
 */
enum SlcsStatus slcs_system_is_consistent(const struct SlcsSystem *sys, bool *out);

/*
 `|S_i|` for the 1-based row `row`, without enumerating it.

 # Safety
 `sys` must be a live handle and `out` a valid pointer.
 */
enum SlcsStatus slcs_system_row_solution_count(const struct SlcsSystem *sys,
                                               size_t row,
                                               uint64_t *out);

/*
 SHA-256 of the canonical system JSON, as lowercase hex. Free the
 result with [`slcs_string_free`].

 # Safety
 `sys` must be a live handle and `out` a valid pointer.
 */
enum SlcsStatus slcs_system_digest(const struct SlcsSystem *sys, char **out);

/*
 Supports, solution-set sizes, solvability and graph sizes.

 # Safety
 `sys` must be a live handle and `report` a valid pointer. When the
 command runs to completion (`SLCS_STATUS_OK` or
 `SLCS_STATUS_CHECK_FAILED`), `*report` receives a string to release
 with [`slcs_string_free`].
 */
enum SlcsStatus slcs_analyze(const struct SlcsSystem *sys, char **report);

/*
 Gaussian elimination and the best deterministic syncLCS strategy.

 # Safety
 As for [`slcs_analyze`].
 */
enum SlcsStatus slcs_solve(const struct SlcsSystem *sys, char **report);

/*
 Isomorphism search between `G_{A,b}` and `G_{A,0}`.

 # Safety
 As for [`slcs_analyze`].
 */
enum SlcsStatus slcs_iso(const struct SlcsSystem *sys, char **report);

/*
 The solution group presentation, embedded in the report.

 # Safety
 As for [`slcs_analyze`].
 */
enum SlcsStatus slcs_group(const struct SlcsSystem *sys, char **report);

/*
 Representation checks. `source` is `pauli-ms`, `scalar:auto`,
 `scalar:<x1,..,xn>` or a path to a matrix JSON file.

 # Safety
 As for [`slcs_analyze`]; `source` must be a nul-terminated string.
 */
enum SlcsStatus slcs_repcheck(const struct SlcsSystem *sys,
                              const char *source,
                              double tol,
                              char **report);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must come from this library and not be used afterwards.
 */
void slcs_string_free(char *s);

/*
 The message for the last failed call on this thread, or null. Valid
 until the next failing call on the same thread.
 */
const char *slcs_last_error(void);

/*
 The library version as a static string.
 */
const char *slcs_version(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SYNCLCS_H */
