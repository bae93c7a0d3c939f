// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the pmde authors

#pragma once

#include <cstdint>

#include "pmde/polarization.hpp"

// Deterministic random streams for the Monte-Carlo paths. Hand-rolled on a
// splitmix64 core so results are identical across standard libraries and
// platforms; per-draw substreams make sampling order-independent.

namespace pmde::detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

struct Stream {
    std::uint64_t state;

    static Stream for_draw(std::uint64_t seed, std::uint64_t draw) {
        return {mix64(seed ^ mix64(draw + 0x632BE59BD9B4E019ull))};
    }

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        return mix64(state);
    }

    /// Uniform double in (0, 1].
    double unit() {
        const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
        return 1.0 - u;
    }

    /// Standard normal pair, Box-Muller.
    void gauss_pair(double& a, double& b) {
        const double u1 = unit();
        const double u2 = unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * 3.141592653589793 * u2;
        a = r * std::cos(phi);
        b = r * std::sin(phi);
    }
};

/// Haar-uniform SO(3) rotation from a random unit quaternion.
inline Rotation haar_rotation(Stream& rng) {
    double q[4];
    double n2 = 0.0;
    do {
        rng.gauss_pair(q[0], q[1]);
        rng.gauss_pair(q[2], q[3]);
        n2 = q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3];
    } while (n2 < 1e-24);
    const double inv = 1.0 / std::sqrt(n2);
    const double w = q[0] * inv, x = q[1] * inv, y = q[2] * inv, z = q[3] * inv;
    return {{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
             {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
             {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}}};
}

}  // namespace pmde::detail
