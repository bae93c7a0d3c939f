// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the pmde authors

#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <vector>

#include "oracle.hpp"
#include "pmde/scrambler.hpp"
#include "pmde/statistics.hpp"

using namespace pmde;

namespace {

constexpr double pi = std::numbers::pi;

bool same_matrix(const JonesMatrix& a, const JonesMatrix& b) {
    return a.xx == b.xx && a.xy == b.xy && a.yx == b.yx && a.yy == b.yy;
}

ScramblerTrajectory single_hwp(double rate, double orientation = 0.0) {
    WaveplateStack stack;
    stack.plates.push_back({PlateKind::hwp, orientation, rate, {}});
    return {stack, 0.0};
}

}  // namespace

TEST_CASE("scrambler_at: static stacks are constant, evaluation is deterministic") {
    WaveplateStack stack;
    stack.plates = {{PlateKind::qwp, 0.3, 0.0, {}},
                    {PlateKind::hwp, 1.1, 0.0, {}},
                    {PlateKind::qwp, -0.4, 0.0, {}}};
    const ScramblerTrajectory traj{stack, 0.0};
    const JonesMatrix j0 = scrambler_at(traj, 0.0);
    for (double t : {1e-6, 0.5, 123.0}) CHECK(same_matrix(scrambler_at(traj, t), j0));
    CHECK(same_matrix(scrambler_at(traj, 0.37), scrambler_at(traj, 0.37)));
}

TEST_CASE("scrambler_at: a rotated HWP acts about the advanced azimuth") {
    const double rate = 2.0e5;
    const ScramblerTrajectory traj = single_hwp(rate);
    const double t = pi / (2.0 * rate);  // plate advanced by pi/2
    const Rotation r = rotation_of(scrambler_at(traj, t));
    // Stokes axis sits at twice the plate azimuth: advanced by pi.
    const Stokes axis{std::cos(pi), std::sin(pi), 0.0};
    oracle::Rng rng(71);
    for (int i = 0; i < 20; ++i) {
        const Stokes v = rng.unit_vector();
        CHECK(norm(r * v - oracle::rotate(axis, pi, v)) < 1e-10);
    }
}

TEST_CASE("scrambler_at: seven-plate stack at t=0 equals its static composition") {
    const WaveplateStack stack = seven_plate_stack(5.0e6);
    REQUIRE(stack.plates.size() == 7);
    JonesMatrix expected = JonesMatrix::identity();
    for (const auto& plate : stack.plates)
        expected = jones_of(Waveplate{plate.kind, plate.orientation}) * expected;
    CHECK(same_matrix(scrambler_at({stack, 0.0}, 0.0), expected));
}

TEST_CASE("scrambler_at stays unitary at every time") {
    WaveplateStack stack = seven_plate_stack(5.0e6);
    stack.plates[3].burst = make_lightning_burst(15.0e6, 5e-6, 1e-6);
    const ScramblerTrajectory traj{stack, 0.0};
    oracle::Rng rng(73);
    for (int i = 0; i < 200; ++i)
        CHECK(unitarity_residual(scrambler_at(traj, rng.uniform(0.0, 1e-5))) < 1e-10);
}

TEST_CASE("continuity: the output arc shrinks linearly with dt, bursts included") {
    for (BurstEnvelope envelope : {BurstEnvelope::triangular, BurstEnvelope::raised_cosine}) {
        WaveplateStack stack = seven_plate_stack(1.0e6);
        stack.plates[3].burst = make_lightning_burst(10.0e6, 10e-6, 0.0, envelope);
        const ScramblerTrajectory traj{stack, 0.0};
        const Stokes in{0, 1, 0};
        for (double t : {2.5e-6, 5.0e-6, 7.5e-6}) {
            const double arc1 = angle_between(rotation_of(scrambler_at(traj, t)) * in,
                                              rotation_of(scrambler_at(traj, t + 2e-9)) * in);
            const double arc2 = angle_between(rotation_of(scrambler_at(traj, t)) * in,
                                              rotation_of(scrambler_at(traj, t + 1e-9)) * in);
            if (arc1 > 1e-6) CHECK(arc1 / arc2 == doctest::Approx(2.0).epsilon(0.1));
        }
    }
}

TEST_CASE("endlessness: orientations accumulate without wrap transients") {
    const double rate = 1.0e4;
    const ScramblerTrajectory traj = single_hwp(rate);
    // Cross a multiple of 2*pi in plate orientation; the response must glide
    // straight through.
    const double t_wrap = 2.0 * pi * 50.0 / rate;
    const Stokes in{1, 0, 0};
    const double before = angle_between(rotation_of(scrambler_at(traj, t_wrap - 2e-9)) * in,
                                        rotation_of(scrambler_at(traj, t_wrap - 1e-9)) * in);
    const double across = angle_between(rotation_of(scrambler_at(traj, t_wrap - 1e-9)) * in,
                                        rotation_of(scrambler_at(traj, t_wrap)) * in);
    CHECK(across == doctest::Approx(before).epsilon(1e-3));
}

TEST_CASE("sop_speed") {
    SUBCASE("static stack does not move") {
        WaveplateStack stack;
        stack.plates = {{PlateKind::qwp, 0.7, 0.0, {}}};
        CHECK(sop_speed({stack, 0.0}, {1, 0, 0}, 0.0, 1e-9) == doctest::Approx(0.0).scale(1.0));
    }
    SUBCASE("rotating HWP reaches 4x its physical rate on the equator") {
        const double rate = 5.0e6;
        const double speed = sop_speed(single_hwp(rate), {1, 0, 0}, 1.3e-7, 1e-10);
        CHECK(speed == doctest::Approx(4.0 * rate).epsilon(1e-3));
    }
    SUBCASE("an input pinned to the rotation axis barely moves") {
        const double rate = 5.0e6;
        CHECK(sop_speed(single_hwp(rate), {0, 0, 1}, 0.0, 1e-10) < 1.0);
        CHECK(sop_speed(single_hwp(rate), {0, 0, -1}, 0.0, 1e-10) < 1.0);
    }
    SUBCASE("steps subtending 0.1 rad are rejected") {
        try {
            sop_speed(single_hwp(5.0e6), {1, 0, 0}, 0.0, 1e-7);
            FAIL("expected step_too_large");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::step_too_large);
        }
    }
}

TEST_CASE("max_sop_speed") {
    SUBCASE("static stack") {
        WaveplateStack stack;
        stack.plates = {{PlateKind::qwp, 0.7, 0.0, {}}};
        CHECK(max_sop_speed({stack, 0.0}, 0.0, 1e-9, 128) == doctest::Approx(0.0).scale(1.0));
    }
    SUBCASE("rotating HWP: worst case is 4x the physical rate within 1%") {
        const double rate = 5.0e6;
        const double speed = max_sop_speed(single_hwp(rate), 0.4e-6, 1e-10, 1024);
        CHECK(speed == doctest::Approx(4.0 * rate).epsilon(0.01));
        CHECK(speed <= 4.0 * rate * (1.0 + 1e-6));
    }
    SUBCASE("probe count below 64 is rejected") {
        CHECK_THROWS_AS(max_sop_speed(single_hwp(1.0e3), 0.0, 1e-9, 32), Error);
    }
}

TEST_CASE("lightning burst: construction and validation") {
    CHECK_THROWS_AS(make_lightning_burst(1.0e6, 0.0, 0.0), Error);
    CHECK_THROWS_AS(make_lightning_burst(60.0e6, 1e-6, 0.0), Error);
    const BurstProgram burst = make_lightning_burst(20.0e6, 10e-6, 0.0);
    CHECK(burst.axis.s3 == doctest::Approx(1.0));
    CHECK(burst.rate_at(-1e-9) == 0.0);
    CHECK(burst.rate_at(11e-6) == 0.0);
    CHECK(burst.rate_at(2.5e-6) == doctest::Approx(20.0e6));
    CHECK(burst.rate_at(7.5e-6) == doctest::Approx(-20.0e6));
    CHECK(std::abs(burst.angle_at(10e-6)) < 1e-12);
}

TEST_CASE("burst envelopes: the integrated angle matches the rate") {
    for (BurstEnvelope envelope : {BurstEnvelope::triangular, BurstEnvelope::raised_cosine}) {
        const BurstProgram burst = make_lightning_burst(5.0e6, 8e-6, 1e-6, envelope);
        for (int i = 1; i < 40; ++i) {
            const double t = 1e-6 + 8e-6 * i / 40.0;
            const double dt = 1e-10;
            const double slope = (burst.angle_at(t + dt) - burst.angle_at(t - dt)) / (2.0 * dt);
            CHECK(slope == doctest::Approx(burst.rate_at(t)).epsilon(1e-4).scale(5.0e6));
        }
    }
}

TEST_CASE("burst with zero peak leaves the trajectory untouched") {
    WaveplateStack stack = seven_plate_stack(2.0e6);
    const ScramblerTrajectory plain{stack, 0.0};
    stack.plates[3].burst = make_lightning_burst(0.0, 10e-6, 0.0);
    const ScramblerTrajectory with_burst{stack, 0.0};
    for (double t : {0.0, 3e-6, 9e-6, 2e-5})
        CHECK(same_matrix(scrambler_at(plain, t), scrambler_at(with_burst, t)));
}

TEST_CASE("triangular burst: worst-case speed traces the forth/back triangle") {
    const double peak = 20.0e6;
    const double duration = 10e-6;
    WaveplateStack stack = seven_plate_stack(0.0);  // static host
    const BurstProgram burst = make_lightning_burst(peak, duration, 0.0);
    stack.plates[3].burst = burst;
    const ScramblerTrajectory traj{stack, 0.0};
    const double dt = duration * 1e-4;

    // Apex of the forth stroke.
    const double apex = max_sop_speed(traj, duration / 4.0 - dt / 2.0, dt, 1024);
    CHECK(apex == doctest::Approx(peak).epsilon(0.02));

    // The dt-averaged rate is the exact expectation at every sample.
    for (int i = 1; i < 16; ++i) {
        const double t = duration * (i + 0.37) / 16.0;
        const double expected = std::abs(burst.angle_at(t + dt) - burst.angle_at(t)) / dt;
        const double measured = max_sop_speed(traj, t, dt, 1024);
        CHECK(measured == doctest::Approx(expected).epsilon(0.01).scale(peak));
    }
}

TEST_CASE("forth/back burst returns the SOP to its pre-burst position") {
    // Controlled host: a single static HWP at 0 keeps the (1,0,0) probe on
    // the burst equator, and the modest peak keeps the swing under a turn,
    // so the mid-burst displacement equals the integrated angle exactly.
    for (BurstEnvelope envelope : {BurstEnvelope::triangular, BurstEnvelope::raised_cosine}) {
        WaveplateStack stack;
        stack.plates.push_back({PlateKind::hwp, 0.0, 0.0, {}});
        stack.plates[0].burst = make_lightning_burst(2.0e5, 10e-6, 1e-6, envelope);
        const ScramblerTrajectory traj{stack, 0.0};
        const Stokes in{1, 0, 0};
        const Stokes before = rotation_of(scrambler_at(traj, 1e-6)) * in;
        const Stokes mid = rotation_of(scrambler_at(traj, 1e-6 + 5e-6)) * in;
        const Stokes after = rotation_of(scrambler_at(traj, 1e-6 + 10e-6)) * in;
        const double swing = std::abs(stack.plates[0].burst->angle_at(1e-6 + 5e-6));
        CHECK(angle_between(before, mid) == doctest::Approx(swing).epsilon(1e-9));
        CHECK(swing > 0.3);  // the burst really moved it
        CHECK(angle_between(before, after) < 1e-3);
    }

    // The acceptance-style configuration: a full static seven-plate stack
    // under a 20 Mrad/s triangular burst still returns exactly.
    WaveplateStack stack = seven_plate_stack(0.0);
    stack.plates[3].burst = make_lightning_burst(20.0e6, 10e-6, 1e-6);
    const ScramblerTrajectory traj{stack, 0.0};
    const Stokes in{1, 0, 0};
    const Stokes before = rotation_of(scrambler_at(traj, 1e-6)) * in;
    const Stokes after = rotation_of(scrambler_at(traj, 1e-6 + 10e-6)) * in;
    CHECK(angle_between(before, after) < 1e-3);
}

TEST_CASE("speed histogram: static stack is a point mass at zero") {
    WaveplateStack stack;
    stack.plates = {{PlateKind::hwp, 0.9, 0.0, {}}};
    const SpeedHistogram hist = speed_histogram({stack, 0.0}, {1, 0, 0}, 0.0, 1e-3, 200, 1e-9, 16);
    CHECK(hist.max_radps < 1e-9);
    CHECK(hist.counts[0] == hist.samples);
}

TEST_CASE("speed histogram: a dominant HWP concentrates mass near 4x its rate") {
    const double hwp_rate = 1.0e6;
    WaveplateStack stack;
    stack.plates = {{PlateKind::qwp, 0.0, 3.0, {}},
                    {PlateKind::hwp, 0.0, hwp_rate, {}},
                    {PlateKind::qwp, 0.0, 5.0, {}}};
    const SpeedHistogram hist =
        speed_histogram({stack, 0.0}, {1, 0, 0}, 0.0, 1e-3, 20000, 1e-9, 100);
    std::size_t mode = 0;
    for (std::size_t b = 0; b < hist.counts.size(); ++b)
        if (hist.counts[b] > hist.counts[mode]) mode = b;
    const double mode_speed = (hist.edges[mode] + hist.edges[mode + 1]) / 2.0;
    CHECK(mode_speed == doctest::Approx(4.0 * hwp_rate).epsilon(0.05));
}

TEST_CASE("speed histogram: comparable incommensurate rates look Rayleigh") {
    // Seven plates whose Stokes-space contributions are of the same order
    // (the HWP physical rate is halved to offset its 4x factor).
    const double base = 1.0e5;
    const double mults[7] = {3.3166247903554,   3.605551275463989, 4.123105625617661,
                             2.179449471770337, 4.795831523312719, 5.385164807134504,
                             5.567764362830022};
    WaveplateStack stack;
    for (int i = 0; i < 7; ++i)
        stack.plates.push_back(
            {i == 3 ? PlateKind::hwp : PlateKind::qwp, 0.4 * i, base * mults[i], {}});
    const ScramblerTrajectory traj{stack, 0.0};

    const int n = 20000;
    std::vector<double> speeds;
    speeds.reserve(n);
    for (int i = 0; i < n; ++i)
        speeds.push_back(sop_speed(traj, {1, 0, 0}, 0.5 * (i + 0.5) / n, 1e-9));

    double sum2 = 0.0;
    for (double v : speeds) sum2 += v * v;
    const double sigma = std::sqrt(sum2 / n / 2.0);  // Rayleigh fit through the rms
    const double ks = ks_distance(speeds, [&](double x) { return rayleigh_cdf(x, sigma); });
    CHECK(ks < 0.1);

    // Positive mode, vanishing density at zero.
    const int low = static_cast<int>(std::count_if(speeds.begin(), speeds.end(),
                                                   [&](double v) { return v < 0.05 * sigma; }));
    CHECK(static_cast<double>(low) / n < 0.01);
}

TEST_CASE("default seven-plate stack covers the sphere") {
    const WaveplateStack stack = seven_plate_stack(5.0e6);

    // All rates distinct and hierarchical: QWPs trail the HWP by more than
    // two orders of magnitude.
    for (std::size_t i = 0; i < stack.plates.size(); ++i)
        for (std::size_t j = i + 1; j < stack.plates.size(); ++j)
            CHECK(stack.plates[i].rate != stack.plates[j].rate);
    for (const auto& plate : stack.plates)
        if (plate.kind == PlateKind::qwp) CHECK(plate.rate < 5.0e6 / 100.0);

    const ScramblerTrajectory traj{stack, 0.0};
    const Stokes in{1, 0, 0};
    const int samples = 100000;
    std::vector<Stokes> outputs;
    outputs.reserve(samples);
    for (int i = 0; i < samples; ++i)
        outputs.push_back(rotation_of(scrambler_at(traj, 0.05 * i / samples)) * in);

    const double cos_limit = std::cos(0.2);
    for (const Stokes& probe : fibonacci_sphere(162)) {
        double best = -1.0;
        for (const Stokes& s : outputs) best = std::max(best, dot(probe, s));
        CHECK(best > cos_limit);
    }
}
