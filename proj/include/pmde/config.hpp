// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the pmde authors

#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pmde/emulator.hpp"

// Run configuration: JSON text with every physical quantity written as a
// "<value> <unit>" string (e.g. "26 ps", "193.4 THz", "5 Mrad/s"). Bare
// numbers on physical fields are rejected. Defaults materialize at parse
// time so a parsed configuration is complete and self-describing.

namespace pmde {

struct TimeGrid {
    double start = 0.0;  // s
    double step = 1e-3;  // s
    int count = 1;
};

/// Grid written in plain frequency; converted to angular form when used.
struct GridSpec {
    double center_hz = 0.0;  // 0 = follow the emulator carrier
    double span_hz = 100.0e9;
    int points = 41;

    FrequencyGrid angular() const {
        return {2.0 * std::numbers::pi * center_hz, 2.0 * std::numbers::pi * span_hz, points};
    }
};

struct StatsOptions {
    std::uint64_t samples = 100000;
    int bins = 64;
    std::optional<int> compare_n_sections;  // paired run with this many equal sections
};

struct TaylorOptions {
    std::vector<int> orders = {0, 1, 2};
    double half_band_hz = 500.0e9;
    // 40 MHz spacing keeps the extraction stencil trustworthy up to about
    // 400 ps of total DGD.
    int points = 25001;
};

struct LightningOptions {
    double peak = 20.0e6;     // rad/s, Stokes space
    double duration = 10e-6;  // s
    double start = 0.0;       // s
    BurstEnvelope envelope = BurstEnvelope::triangular;
    int samples = 512;   // trace points across the burst window
    double dt = 1e-9;    // s, speed-measurement step
    int scrambler_index = 0;  // which emulator scrambler hosts the burst
};

struct SweepOptions {
    double section_dgd_ps = 26.0;
    int points = 181;
};

struct ProbeOptions {
    int count = 256;   // probe SOPs for worst-case speed
    double dt = 1e-9;  // s
};

struct RunConfig {
    std::optional<EmulatorConfig> emulator;
    GridSpec grid;
    TimeGrid time;
    std::uint64_t seed = 0;
    StatsOptions stats;
    TaylorOptions taylor;
    LightningOptions lightning;
    SweepOptions sweep;
    ProbeOptions probe;
};

/// Parses and validates a configuration.
/// Throws ParseError (with line/column) on malformed text and
/// Error(validation_error | invalid_config) on violated invariants.
RunConfig parse_config(std::string_view text);

/// Canonical JSON serialization; numbers round-trip exactly.
std::string serialize(const RunConfig& cfg);

/// FNV-1a hash of the canonical serialization.
std::uint64_t config_hash(const RunConfig& cfg);

inline bool operator==(const RunConfig& a, const RunConfig& b) {
    return serialize(a) == serialize(b);
}

// Quantity parsing, exposed for reuse. Each accepts "<value> <unit>".
double parse_time_s(std::string_view text);        // ps | ns | us | ms | s
double parse_frequency_hz(std::string_view text);  // Hz | kHz | MHz | GHz | THz
double parse_rate_radps(std::string_view text);    // rad/s | krad/s | Mrad/s
double parse_angle_rad(std::string_view text);     // rad

/// "<value> <unit>" with an exact shortest-round-trip value.
std::string format_quantity(double value, std::string_view unit);

}  // namespace pmde
