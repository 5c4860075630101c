#ifndef REEBTOP_H
#define REEBTOP_H

#pragma once

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum RtStatus {
  RT_STATUS_OK = 0,
  RT_STATUS_NULL_ARGUMENT = 1,
  RT_STATUS_INVALID_UTF8 = 2,
  RT_STATUS_PARSE = 3,
  RT_STATUS_INVALID_INPUT = 4,
  RT_STATUS_UNSUPPORTED = 5,
  RT_STATUS_PANIC = 6,
} RtStatus;

/**
 * Parsed group presentation.
 */
typedef struct RtPresentation RtPresentation;

/**
 * Reeb graph produced by a simulation or parsed from JSON.
 */
typedef struct RtReebGraph RtReebGraph;

/**
 * Degree census of a Reeb graph.
 */
typedef struct RtCensus {
  size_t vertices;
  size_t edges;
  size_t delta1;
  size_t delta2;
  size_t delta3;
  size_t cycle_rank;
} RtCensus;

/**
 * Summary of a degree-2 vertex estimate. `upper` is -1 when unbounded.
 */
typedef struct RtEstimate {
  int64_t lower;
  int64_t upper;
  bool exact;
} RtEstimate;

/**
 * Message of the last failure on this thread, or NULL. Valid until the next
 * call into the library from the same thread.
 */
const char *rt_last_error_message(void);

/**
 * Releases a string returned by the library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void rt_string_free(char *s);

/**
 * Parses `gens: a, b ; rels: ...`.
 *
 * # Safety
 * `src` must be a NUL-terminated string and `out` a valid pointer.
 */
enum RtStatus rt_presentation_parse(const char *src, struct RtPresentation **out);

/**
 * # Safety
 * `p` must come from `rt_presentation_parse` and not have been freed.
 */
void rt_presentation_free(struct RtPresentation *p);

/**
 * Generators minus relators.
 *
 * # Safety
 * `p` must be a live presentation handle and `out` a valid pointer.
 */
enum RtStatus rt_presentation_deficiency(const struct RtPresentation *p, int64_t *out);

/**
 * Ω for the given order, or the minimum over orders when `search` is set.
 * `certified` (may be NULL) reports whether a searched value is exact.
 *
 * # Safety
 * `p` must be a live presentation handle; `out` must be valid.
 */
enum RtStatus rt_presentation_omega(const struct RtPresentation *p,
                                    bool search,
                                    uint64_t budget,
                                    uint64_t seed,
                                    size_t *out,
                                    bool *certified);

/**
 * Abelian invariants as text, e.g. `Z^2 + Z/3`.
 *
 * # Safety
 * `p` must be a live presentation handle; `out` must be valid.
 */
enum RtStatus rt_abelianize(const struct RtPresentation *p, char **out);

/**
 * Runs a handle script and returns its Reeb graph.
 *
 * # Safety
 * `script` must be NUL-terminated; `out` must be valid.
 */
enum RtStatus rt_simulate_script(const char *script, struct RtReebGraph **out);

/**
 * Parses a Reeb graph from JSON.
 *
 * # Safety
 * `src` must be NUL-terminated; `out` must be valid.
 */
enum RtStatus rt_reeb_from_json(const char *src, struct RtReebGraph **out);

/**
 * # Safety
 * `g` must be a live graph handle; `out` must be valid.
 */
enum RtStatus rt_reeb_census(const struct RtReebGraph *g, struct RtCensus *out);

/**
 * # Safety
 * `g` must be a live graph handle; `out` must be valid.
 */
enum RtStatus rt_reeb_to_dot(const struct RtReebGraph *g, char **out);

/**
 * # Safety
 * `g` must come from this library and not have been freed.
 */
void rt_reeb_free(struct RtReebGraph *g);

/**
 * Estimate for a catalog name (`heisenberg`, `lens(5)`, ...) or a profile in
 * JSON. `report` (may be NULL) receives the full text report.
 *
 * # Safety
 * `profile` must be NUL-terminated; `out` must be valid.
 */
enum RtStatus rt_bounds_estimate(const char *profile, struct RtEstimate *out, char **report);

#endif  /* REEBTOP_H */
