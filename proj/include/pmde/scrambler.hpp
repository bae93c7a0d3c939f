// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the pmde authors

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pmde/polarization.hpp"

// Time-variable retarders built from rotating waveplates, with optional
// burst programs for fast forth/back rotation events (the signature of a
// lightning strike acting on the fiber through the Faraday effect).
//
// Plate orientations are unbounded real angles; nothing ever wraps, so a
// monotone rotation accumulates endlessly without reset transients.
// Scrambling speed is defined as the worst case over input SOPs of the
// great-circle rate of the output SOP.

namespace pmde {

enum class BurstEnvelope { triangular, raised_cosine };

/// Forth/back rotation burst about a fixed Stokes axis. The signed rate
/// profile is antisymmetric about the burst midpoint, so the integrated
/// retardation returns to zero when the burst ends.
struct BurstProgram {
    double start = 0.0;     // s
    double duration = 0.0;  // s
    double peak = 0.0;      // rad/s in Stokes space, signed
    BurstEnvelope envelope = BurstEnvelope::triangular;
    Stokes axis{0.0, 0.0, 1.0};

    /// Signed Stokes-space rotation rate at time t, rad/s.
    double rate_at(double t) const;
    /// Integrated retardation at time t, rad. Zero before and after.
    double angle_at(double t) const;
};

struct ScramblerPlate {
    PlateKind kind = PlateKind::qwp;
    double orientation = 0.0;  // rad, physical azimuth at the time origin
    double rate = 0.0;         // rad/s, physical plate rotation rate
    std::optional<BurstProgram> burst;  // applied right after this plate
};

struct WaveplateStack {
    std::vector<ScramblerPlate> plates;
};

struct ScramblerTrajectory {
    WaveplateStack stack;
    double origin = 0.0;  // s, time at which plates sit at their orientation fields
};

/// Default ceiling for burst peak rates, rad/s in Stokes space.
inline constexpr double default_burst_rate_limit = 50.0e6;

/// Transfer matrix of the stack at time t: product of the plates at their
/// time-t orientations in propagation order, bursts included. Pure in
/// (trajectory, t).
JonesMatrix scrambler_at(const ScramblerTrajectory& traj, double t);

/// Great-circle arc between the output SOPs at t and t+dt, divided by dt.
/// Throws step_too_large if the arc reaches 0.1 rad.
double sop_speed(const ScramblerTrajectory& traj, const Stokes& input, double t, double dt);

/// Maximum of sop_speed over `probes` quasi-uniform input SOPs (>= 64).
double max_sop_speed(const ScramblerTrajectory& traj, double t, double dt, int probes);

/// Burst about the circular axis (0,0,1) with a forth/back profile peaking
/// at |peak|. Throws invalid_config for non-positive duration or a peak
/// beyond max_rate.
BurstProgram make_lightning_burst(double peak, double duration, double start,
                                  BurstEnvelope envelope = BurstEnvelope::triangular,
                                  double max_rate = default_burst_rate_limit);

struct SpeedHistogram {
    std::vector<double> edges;  // rad/s, bins+1 entries
    std::vector<std::uint64_t> counts;
    std::uint64_t samples = 0;
    double max_radps = 0.0;
};

/// Empirical distribution of sop_speed over `samples` times spread evenly
/// across [t_begin, t_end). Supports telling a Rayleigh-like configuration
/// (many comparable plate rates) from a peaked one (one fast HWP).
SpeedHistogram speed_histogram(const ScramblerTrajectory& traj, const Stokes& input,
                               double t_begin, double t_end, int samples, double dt, int bins);

inline constexpr double default_qwp_scale = 1.0 / 500.0;

/// Seven-plate scrambler: three QWPs, one fast HWP, three QWPs. QWP rates
/// are the HWP rate scaled by qwp_scale times distinct square roots of
/// primes, so all rates are pairwise incommensurate. The HWP dominates:
/// its Stokes-space speed is 4 * hwp_rate, the QWPs trail by two to three
/// orders of magnitude at the default scale.
WaveplateStack seven_plate_stack(double hwp_rate, double qwp_scale = default_qwp_scale,
                                 double orientation_offset = 0.0);

/// Upper bound on a stack's Stokes-space speed: each plate rotating at
/// physical rate w moves no SOP faster than 4|w|.
double stack_speed_bound(const WaveplateStack& stack);

}  // namespace pmde
