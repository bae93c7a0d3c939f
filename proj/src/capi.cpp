// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the pmde authors

#include "pmde.h"

#include <cstring>
#include <string>

#include "pmde/run.hpp"

// C surface of the library. Exceptions stop here: every entry point maps
// pmde::Error codes onto pmde_status values and stashes the message in a
// thread-local buffer.

namespace {

thread_local std::string last_error;

pmde_status status_of(pmde::ErrorCode code) {
    using pmde::ErrorCode;
    switch (code) {
        case ErrorCode::parse_error: return PMDE_ERROR_PARSE;
        case ErrorCode::validation_error: return PMDE_ERROR_VALIDATION;
        case ErrorCode::invalid_config: return PMDE_ERROR_INVALID_CONFIG;
        case ErrorCode::arity_mismatch: return PMDE_ERROR_ARITY_MISMATCH;
        case ErrorCode::non_unitary_input: return PMDE_ERROR_NON_UNITARY;
        case ErrorCode::grid_too_coarse: return PMDE_ERROR_GRID_TOO_COARSE;
        case ErrorCode::degenerate_pmd: return PMDE_ERROR_DEGENERATE_PMD;
        case ErrorCode::step_too_large: return PMDE_ERROR_STEP_TOO_LARGE;
        case ErrorCode::neutral_unavailable: return PMDE_ERROR_NEUTRAL_UNAVAILABLE;
        case ErrorCode::length_mismatch: return PMDE_ERROR_LENGTH_MISMATCH;
        case ErrorCode::io_error: return PMDE_ERROR_IO;
        case ErrorCode::internal_error: return PMDE_ERROR_INTERNAL;
    }
    return PMDE_ERROR_INTERNAL;
}

template <typename Fn>
pmde_status guarded(Fn&& fn) {
    try {
        fn();
        last_error.clear();
        return PMDE_OK;
    } catch (const pmde::Error& e) {
        last_error = e.what();
        return status_of(e.code());
    } catch (const std::exception& e) {
        last_error = e.what();
        return PMDE_ERROR_INTERNAL;
    } catch (...) {
        last_error = "unknown error";
        return PMDE_ERROR_INTERNAL;
    }
}

pmde_status invalid_argument(const char* message) {
    last_error = message;
    return PMDE_ERROR_INVALID_ARGUMENT;
}

pmde::EmulatorConfig emulator_from_json(const char* config_json) {
    const std::string text(config_json);
    // Accept a full run configuration or a bare emulator object.
    if (text.find("\"emulator\"") != std::string::npos) {
        const pmde::RunConfig cfg = pmde::parse_config(text);
        if (!cfg.emulator)
            pmde::fail(pmde::ErrorCode::validation_error, "configuration has no emulator");
        return *cfg.emulator;
    }
    const pmde::RunConfig cfg = pmde::parse_config("{\"emulator\": " + text + "}");
    return *cfg.emulator;
}

}  // namespace

struct pmde_emulator {
    pmde::EmulatorState state;
};

extern "C" {

const char* pmde_version(void) { return "0.1.0"; }

const char* pmde_status_name(pmde_status status) {
    switch (status) {
        case PMDE_OK: return "PMDE_OK";
        case PMDE_ERROR_PARSE: return "PMDE_ERROR_PARSE";
        case PMDE_ERROR_VALIDATION: return "PMDE_ERROR_VALIDATION";
        case PMDE_ERROR_INVALID_CONFIG: return "PMDE_ERROR_INVALID_CONFIG";
        case PMDE_ERROR_ARITY_MISMATCH: return "PMDE_ERROR_ARITY_MISMATCH";
        case PMDE_ERROR_NON_UNITARY: return "PMDE_ERROR_NON_UNITARY";
        case PMDE_ERROR_GRID_TOO_COARSE: return "PMDE_ERROR_GRID_TOO_COARSE";
        case PMDE_ERROR_DEGENERATE_PMD: return "PMDE_ERROR_DEGENERATE_PMD";
        case PMDE_ERROR_STEP_TOO_LARGE: return "PMDE_ERROR_STEP_TOO_LARGE";
        case PMDE_ERROR_NEUTRAL_UNAVAILABLE: return "PMDE_ERROR_NEUTRAL_UNAVAILABLE";
        case PMDE_ERROR_LENGTH_MISMATCH: return "PMDE_ERROR_LENGTH_MISMATCH";
        case PMDE_ERROR_IO: return "PMDE_ERROR_IO";
        case PMDE_ERROR_INVALID_ARGUMENT: return "PMDE_ERROR_INVALID_ARGUMENT";
        case PMDE_ERROR_INTERNAL: return "PMDE_ERROR_INTERNAL";
    }
    return "PMDE_ERROR_UNKNOWN";
}

const char* pmde_last_error(void) { return last_error.c_str(); }

pmde_status pmde_emulator_create(const char* config_json, pmde_emulator** out) {
    if (!config_json || !out) return invalid_argument("config_json and out must not be null");
    *out = nullptr;
    return guarded([&] {
        *out = new pmde_emulator{pmde::build(emulator_from_json(config_json))};
    });
}

pmde_status pmde_emulator_create_preset(const char* name, pmde_emulator** out) {
    if (!name || !out) return invalid_argument("name and out must not be null");
    *out = nullptr;
    return guarded([&] { *out = new pmde_emulator{pmde::build(pmde::preset(name))}; });
}

void pmde_emulator_destroy(pmde_emulator* emulator) { delete emulator; }

pmde_status pmde_emulator_section_count(const pmde_emulator* emulator, int* out) {
    if (!emulator || !out) return invalid_argument("emulator and out must not be null");
    *out = emulator->state.section_count();
    last_error.clear();
    return PMDE_OK;
}

pmde_status pmde_emulator_carrier_hz(const pmde_emulator* emulator, double* out) {
    if (!emulator || !out) return invalid_argument("emulator and out must not be null");
    *out = emulator->state.config().carrier_hz;
    last_error.clear();
    return PMDE_OK;
}

pmde_status pmde_emulator_pmd_vector(const pmde_emulator* emulator, double t_s, double out_ps[3]) {
    if (!emulator || !out_ps) return invalid_argument("emulator and out_ps must not be null");
    return guarded([&] {
        const pmde::PmdVector v = pmde::total_pmd_at(emulator->state, t_s);
        out_ps[0] = v.s1;
        out_ps[1] = v.s2;
        out_ps[2] = v.s3;
    });
}

pmde_status pmde_emulator_total_dgd(const pmde_emulator* emulator, double t_s, double* out_ps) {
    if (!emulator || !out_ps) return invalid_argument("emulator and out_ps must not be null");
    return guarded([&] { *out_ps = pmde::norm(pmde::total_pmd_at(emulator->state, t_s)); });
}

pmde_status pmde_emulator_profile(const pmde_emulator* emulator, double t_s,
                                  double* out_segments_ps, int capacity, int* out_count) {
    if (!emulator || !out_count) return invalid_argument("emulator and out_count must not be null");
    return guarded([&] {
        const pmde::DgdProfile profile = pmde::profile_at(emulator->state, t_s);
        *out_count = static_cast<int>(profile.segments.size());
        if (!out_segments_ps || capacity < *out_count)
            pmde::fail(pmde::ErrorCode::length_mismatch,
                       "segment buffer holds " + std::to_string(capacity) + ", need " +
                           std::to_string(*out_count));
        for (int i = 0; i < *out_count; ++i) {
            out_segments_ps[3 * i + 0] = profile.segments[static_cast<std::size_t>(i)].s1;
            out_segments_ps[3 * i + 1] = profile.segments[static_cast<std::size_t>(i)].s2;
            out_segments_ps[3 * i + 2] = profile.segments[static_cast<std::size_t>(i)].s3;
        }
    });
}

pmde_status pmde_emulator_response(const pmde_emulator* emulator, double t_s, double center_hz,
                                   double span_hz, int points, double* out_jones) {
    if (!emulator || !out_jones) return invalid_argument("emulator and out_jones must not be null");
    return guarded([&] {
        const pmde::GridSpec spec{center_hz, span_hz, points};
        const auto responses = pmde::response_at(emulator->state, t_s, spec.angular());
        for (int k = 0; k < points; ++k) {
            const pmde::JonesMatrix& j = responses[static_cast<std::size_t>(k)];
            double* p = out_jones + 8 * k;
            p[0] = j.xx.real();
            p[1] = j.xx.imag();
            p[2] = j.xy.real();
            p[3] = j.xy.imag();
            p[4] = j.yx.real();
            p[5] = j.yx.imag();
            p[6] = j.yy.real();
            p[7] = j.yy.imag();
        }
    });
}

pmde_status pmde_emulator_set_neutral(pmde_emulator* emulator) {
    if (!emulator) return invalid_argument("emulator must not be null");
    return guarded([&] {
        emulator->state = pmde::build(pmde::with_neutral_scramblers(emulator->state.config()));
    });
}

pmde_status pmde_emulator_scrambler_max_speed(const pmde_emulator* emulator, int index, double t_s,
                                              double dt_s, int probes, double* out_radps) {
    if (!emulator || !out_radps) return invalid_argument("emulator and out_radps must not be null");
    return guarded([&] {
        const auto& scramblers = emulator->state.config().scramblers;
        if (index < 0 || static_cast<std::size_t>(index) >= scramblers.size())
            pmde::fail(pmde::ErrorCode::invalid_config, "scrambler index out of range");
        const auto& setting = scramblers[static_cast<std::size_t>(index)];
        if (std::holds_alternative<pmde::Retarder>(setting)) {
            *out_radps = 0.0;  // static retarder: nothing moves
            return;
        }
        *out_radps = pmde::max_sop_speed(std::get<pmde::ScramblerTrajectory>(setting), t_s, dt_s,
                                         probes);
    });
}

pmde_status pmde_run_command(const char* command, const char* config_json, const char* out_dir,
                             int override_seed, unsigned long long seed) {
    if (!command || !config_json || !out_dir)
        return invalid_argument("command, config_json and out_dir must not be null");
    return guarded([&] {
        pmde::RunConfig cfg = pmde::parse_config(config_json);
        if (override_seed) cfg.seed = seed;
        pmde::run_command(command, cfg, out_dir);
    });
}

}  // extern "C"
