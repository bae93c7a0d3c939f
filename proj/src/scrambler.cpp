// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the pmde authors

#include "pmde/scrambler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace pmde {

namespace {

constexpr double pi = std::numbers::pi;

// Unit triangular forth/back rate profile on s in [0,1]:
// up to +1 at 1/4, back through 0 at 1/2, down to -1 at 3/4, back to 0.
double tri_rate(double s) {
    if (s <= 0.25) return 4.0 * s;
    if (s <= 0.5) return 2.0 - 4.0 * s;
    if (s <= 0.75) return -(4.0 * s - 2.0);
    return -(4.0 - 4.0 * s);
}

// Integral of tri_rate from 0 to s; symmetric about s = 1/2, zero at both ends.
double tri_integral(double s) {
    if (s > 0.5) s = 1.0 - s;
    if (s <= 0.25) return 2.0 * s * s;
    return 0.25 - 2.0 * (0.5 - s) * (0.5 - s);
}

}  // namespace

double BurstProgram::rate_at(double t) const {
    const double s = (t - start) / duration;
    if (s <= 0.0 || s >= 1.0) return 0.0;
    if (envelope == BurstEnvelope::triangular) return peak * tri_rate(s);
    return peak * std::sin(2.0 * pi * s);
}

double BurstProgram::angle_at(double t) const {
    const double s = (t - start) / duration;
    if (s <= 0.0 || s >= 1.0) return 0.0;
    if (envelope == BurstEnvelope::triangular) return peak * duration * tri_integral(s);
    return peak * duration * (1.0 - std::cos(2.0 * pi * s)) / (2.0 * pi);
}

JonesMatrix scrambler_at(const ScramblerTrajectory& traj, double t) {
    JonesMatrix j = JonesMatrix::identity();
    const double dt = t - traj.origin;
    for (const auto& plate : traj.stack.plates) {
        const double theta = plate.orientation + plate.rate * dt;
        j = jones_of(Waveplate{plate.kind, theta}) * j;
        if (plate.burst) {
            const double angle = plate.burst->angle_at(t);
            if (angle != 0.0) j = jones_of(Retarder{plate.burst->axis, angle}) * j;
        }
    }
    return j;
}

double sop_speed(const ScramblerTrajectory& traj, const Stokes& input, double t, double dt) {
    if (!(dt > 0.0)) fail(ErrorCode::invalid_config, "sop_speed needs dt > 0");
    const Stokes a = rotation_of(scrambler_at(traj, t)) * input;
    const Stokes b = rotation_of(scrambler_at(traj, t + dt)) * input;
    const double arc = angle_between(a, b);
    if (arc >= 0.1)
        fail(ErrorCode::step_too_large,
             "SOPs subtend " + std::to_string(arc) + " rad over dt; reduce the step");
    return arc / dt;
}

double max_sop_speed(const ScramblerTrajectory& traj, double t, double dt, int probes) {
    if (probes < 64) fail(ErrorCode::invalid_config, "max_sop_speed needs >= 64 probe SOPs");
    if (!(dt > 0.0)) fail(ErrorCode::invalid_config, "max_sop_speed needs dt > 0");
    const Rotation r0 = rotation_of(scrambler_at(traj, t));
    const Rotation r1 = rotation_of(scrambler_at(traj, t + dt));
    double max_arc = 0.0;
    for (const Stokes& s : fibonacci_sphere(probes))
        max_arc = std::max(max_arc, angle_between(r0 * s, r1 * s));
    if (max_arc >= 0.1)
        fail(ErrorCode::step_too_large,
             "SOPs subtend " + std::to_string(max_arc) + " rad over dt; reduce the step");
    return max_arc / dt;
}

BurstProgram make_lightning_burst(double peak, double duration, double start,
                                  BurstEnvelope envelope, double max_rate) {
    if (!(duration > 0.0)) fail(ErrorCode::invalid_config, "burst duration must be positive");
    if (std::abs(peak) > max_rate)
        fail(ErrorCode::invalid_config, "burst peak rate " + std::to_string(peak) +
                                            " rad/s exceeds the configured ceiling");
    return {start, duration, peak, envelope, {0.0, 0.0, 1.0}};
}

SpeedHistogram speed_histogram(const ScramblerTrajectory& traj, const Stokes& input,
                               double t_begin, double t_end, int samples, double dt, int bins) {
    if (samples < 1) fail(ErrorCode::invalid_config, "speed_histogram needs samples >= 1");
    if (bins < 1) fail(ErrorCode::invalid_config, "speed_histogram needs bins >= 1");
    if (!(t_end > t_begin)) fail(ErrorCode::invalid_config, "speed_histogram needs t_end > t_begin");

    std::vector<double> speeds;
    speeds.reserve(static_cast<std::size_t>(samples));
    const double step = (t_end - t_begin) / samples;
    for (int i = 0; i < samples; ++i)
        speeds.push_back(sop_speed(traj, input, t_begin + (i + 0.5) * step, dt));

    SpeedHistogram hist;
    hist.samples = static_cast<std::uint64_t>(samples);
    hist.max_radps = *std::max_element(speeds.begin(), speeds.end());
    const double top = hist.max_radps > 0.0 ? hist.max_radps * (1.0 + 1e-9) : 1.0;
    hist.edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int b = 0; b <= bins; ++b) hist.edges[static_cast<std::size_t>(b)] = top * b / bins;
    hist.counts.assign(static_cast<std::size_t>(bins), 0);
    for (double v : speeds) {
        auto idx = static_cast<std::size_t>(v / top * bins);
        if (idx >= static_cast<std::size_t>(bins)) idx = static_cast<std::size_t>(bins) - 1;
        ++hist.counts[idx];
    }
    return hist;
}

double stack_speed_bound(const WaveplateStack& stack) {
    double bound = 0.0;
    for (const auto& plate : stack.plates) bound += 4.0 * std::abs(plate.rate);
    return bound;
}

WaveplateStack seven_plate_stack(double hwp_rate, double qwp_scale, double orientation_offset) {
    // Square roots of distinct primes keep every rate ratio irrational.
    static constexpr double root_primes[6] = {1.4142135623730951, 1.7320508075688772,
                                              2.23606797749979, 2.6457513110645907,
                                              3.3166247903554, 3.605551275463989};
    const double golden = pi * (3.0 - std::sqrt(5.0));
    WaveplateStack stack;
    stack.plates.reserve(7);
    int qwp = 0;
    for (int i = 0; i < 7; ++i) {
        ScramblerPlate plate;
        plate.orientation = orientation_offset + golden * i;
        if (i == 3) {
            plate.kind = PlateKind::hwp;
            plate.rate = hwp_rate;
        } else {
            plate.kind = PlateKind::qwp;
            plate.rate = hwp_rate * qwp_scale * root_primes[qwp++];
        }
        stack.plates.push_back(plate);
    }
    return stack;
}

}  // namespace pmde
