/* SPDX-License-Identifier: Apache-2.0
 * Copyright (c) 2026 the pmde authors
 *
 * C interface of the pmde shared library. Objects are opaque handles;
 * every function reports a pmde_status and leaves a human-readable message
 * in a thread-local buffer reachable through pmde_last_error().
 *
 * Conventions: times in seconds, frequencies in Hz, DGD in picoseconds,
 * rates in rad/s on the Poincare sphere. Jones matrices are returned as
 * 8 doubles per frequency point: xx_re, xx_im, xy_re, xy_im, yx_re, yx_im,
 * yy_re, yy_im (row-major 2x2).
 */

#ifndef PMDE_H
#define PMDE_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(PMDE_BUILD)
#define PMDE_API __declspec(dllexport)
#else
#define PMDE_API __declspec(dllimport)
#endif
#else
#define PMDE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pmde_status {
    PMDE_OK = 0,
    PMDE_ERROR_PARSE = 1,
    PMDE_ERROR_VALIDATION = 2,
    PMDE_ERROR_INVALID_CONFIG = 3,
    PMDE_ERROR_ARITY_MISMATCH = 4,
    PMDE_ERROR_NON_UNITARY = 5,
    PMDE_ERROR_GRID_TOO_COARSE = 6,
    PMDE_ERROR_DEGENERATE_PMD = 7,
    PMDE_ERROR_STEP_TOO_LARGE = 8,
    PMDE_ERROR_NEUTRAL_UNAVAILABLE = 9,
    PMDE_ERROR_LENGTH_MISMATCH = 10,
    PMDE_ERROR_IO = 11,
    PMDE_ERROR_INVALID_ARGUMENT = 12,
    PMDE_ERROR_INTERNAL = 13
} pmde_status;

typedef struct pmde_emulator pmde_emulator;

PMDE_API const char* pmde_version(void);

/* Stable name of a status code, e.g. "PMDE_ERROR_VALIDATION". */
PMDE_API const char* pmde_status_name(pmde_status status);

/* Message of the last failure on this thread; empty string if none. */
PMDE_API const char* pmde_last_error(void);

/* Builds an emulator from configuration JSON: either a full run
 * configuration (with an "emulator" member) or a bare emulator object. */
PMDE_API pmde_status pmde_emulator_create(const char* config_json, pmde_emulator** out);

/* Builds an emulator from a preset name: "highend-20", "highend-50",
 * "highend-100", "highend-200" or "zr". */
PMDE_API pmde_status pmde_emulator_create_preset(const char* name, pmde_emulator** out);

PMDE_API void pmde_emulator_destroy(pmde_emulator* emulator);

PMDE_API pmde_status pmde_emulator_section_count(const pmde_emulator* emulator, int* out);
PMDE_API pmde_status pmde_emulator_carrier_hz(const pmde_emulator* emulator, double* out);

/* Input-referred PMD vector (ps) at the carrier, scramblers frozen at t. */
PMDE_API pmde_status pmde_emulator_pmd_vector(const pmde_emulator* emulator, double t_s,
                                              double out_ps[3]);

/* Total DGD |PMD| in ps at the carrier, scramblers frozen at t. */
PMDE_API pmde_status pmde_emulator_total_dgd(const pmde_emulator* emulator, double t_s,
                                             double* out_ps);

/* Per-section profile segments, 3 doubles each. `capacity` counts segments;
 * the needed count is written to out_count even when capacity is short. */
PMDE_API pmde_status pmde_emulator_profile(const pmde_emulator* emulator, double t_s,
                                           double* out_segments_ps, int capacity, int* out_count);

/* Channel matrices over a frequency grid, 8 doubles per point into a buffer
 * of at least 8 * points doubles. */
PMDE_API pmde_status pmde_emulator_response(const pmde_emulator* emulator, double t_s,
                                            double center_hz, double span_hz, int points,
                                            double* out_jones);

/* Replaces all scramblers with the static neutral settings (zero PMD of any
 * order). Needs an even section count with equal DGDs. */
PMDE_API pmde_status pmde_emulator_set_neutral(pmde_emulator* emulator);

/* Worst-case output-SOP speed (rad/s) of one scrambler at time t, probed
 * over `probes` (>= 64) input SOPs with step dt. */
PMDE_API pmde_status pmde_emulator_scrambler_max_speed(const pmde_emulator* emulator, int index,
                                                       double t_s, double dt_s, int probes,
                                                       double* out_radps);

/* Runs a CLI command ("emulate", "profile", "stats", "taylor", "lightning",
 * "neutral", "sweep-fig4") with configuration JSON, writing artifacts into
 * out_dir. When override_seed is nonzero, `seed` replaces the configured
 * seed. */
PMDE_API pmde_status pmde_run_command(const char* command, const char* config_json,
                                      const char* out_dir, int override_seed,
                                      unsigned long long seed);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PMDE_H */
