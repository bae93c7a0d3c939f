// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the pmde authors

#pragma once

#include <span>
#include <vector>

#include "pmde/polarization.hpp"

// Differential-group-delay sections, their frequency-dependent cascade, and
// PMD-vector extraction. Two independent routes to the total PMD vector are
// kept side by side: the analytic concatenation of per-section vectors and a
// finite-difference read-out of the cascade response. They must agree; tests
// hold them against each other.
//
// PMD vectors are input-referred by default (each section's contribution is
// rotated back through everything preceding it). The output-referred vector
// is the same quantity rotated through the full channel and is reachable via
// the Referral flag. Only differential delay is modeled; the common-mode
// propagation delay of a section is taken as zero.

namespace pmde {

inline constexpr double default_carrier_hz = 193.4e12;  // 1550 nm band

enum class Referral { input, output };

/// Ideal DGD section: fixed delay difference between the two principal
/// states, slow PSP constant over frequency.
struct DgdSection {
    double dgd_ps = 0.0;  // tau >= 0
    Stokes axis{1.0, 0.0, 0.0};  // slow PSP, unit length
};

/// PMD vector in Stokes space, scaled in picoseconds.
/// Length = DGD, direction = slow PSP.
struct PmdVector {
    double s1 = 0.0;
    double s2 = 0.0;
    double s3 = 0.0;
};

constexpr PmdVector operator+(const PmdVector& a, const PmdVector& b) {
    return {a.s1 + b.s1, a.s2 + b.s2, a.s3 + b.s3};
}
constexpr PmdVector operator-(const PmdVector& a, const PmdVector& b) {
    return {a.s1 - b.s1, a.s2 - b.s2, a.s3 - b.s3};
}
constexpr PmdVector operator*(double c, const PmdVector& a) { return {c * a.s1, c * a.s2, c * a.s3}; }

inline double norm(const PmdVector& a) { return std::sqrt(a.s1 * a.s1 + a.s2 * a.s2 + a.s3 * a.s3); }

inline PmdVector operator*(const Rotation& r, const PmdVector& a) {
    return {r.m[0][0] * a.s1 + r.m[0][1] * a.s2 + r.m[0][2] * a.s3,
            r.m[1][0] * a.s1 + r.m[1][1] * a.s2 + r.m[1][2] * a.s3,
            r.m[2][0] * a.s1 + r.m[2][1] * a.s2 + r.m[2][2] * a.s3};
}

/// Uniform frequency grid in angular frequency (rad/s).
struct FrequencyGrid {
    double center = 0.0;  // rad/s
    double span = 0.0;    // rad/s, full width
    int points = 0;

    double spacing() const { return span / (points - 1); }
    double omega(int k) const { return center + (k - (points - 1) / 2.0) * spacing(); }
    /// Index of the center frequency; the grid must have an odd point count.
    int center_index() const;
    void validate() const;

    static FrequencyGrid centered(double center, double half_span, int half_points) {
        return {center, 2.0 * half_span, 2 * half_points + 1};
    }
};

/// Ordered chain of input-referred per-section PMD vectors at omega0.
struct DgdProfile {
    std::vector<PmdVector> segments;
    double omega0 = 0.0;

    PmdVector total() const {
        PmdVector t;
        for (const auto& s : segments) t = t + s;
        return t;
    }
};

/// Derivatives of the input-referred PMD vector at omega0.
/// derivative[m] is the m-th derivative, in ps * (s/rad)^m.
struct TaylorCoefficients {
    double omega0 = 0.0;
    std::vector<PmdVector> derivative;

    int order() const { return static_cast<int>(derivative.size()) - 1; }
};

struct PspPair {
    Stokes slow;
    Stokes fast;
    double dgd_ps;
};

/// Retardation a section presents at angular frequency omega: omega * tau.
inline double section_retardation(const DgdSection& s, double omega) { return omega * s.dgd_ps * 1e-12; }

/// Lossless transfer matrix of a DGD section at omega. The section axis is
/// the slow PSP: launching it yields +tau/2 group delay, the opposite -tau/2.
JonesMatrix section_jones(const DgdSection& s, double omega);

/// Response of retarder_0, section_1, retarder_1, ..., section_N, retarder_N
/// at every grid frequency. Retarders are frequency-flat.
/// Throws arity_mismatch unless retarders.size() == sections.size() + 1.
std::vector<JonesMatrix> cascade_response(std::span<const DgdSection> sections,
                                          std::span<const JonesMatrix> retarders,
                                          const FrequencyGrid& grid);
std::vector<JonesMatrix> cascade_response(std::span<const DgdSection> sections,
                                          std::span<const Retarder> retarders,
                                          const FrequencyGrid& grid);

/// Total PMD vector at omega0 by vectorial concatenation: each section
/// contributes tau * axis rotated back through all preceding elements
/// (retarders and sections, the latter evaluated at omega0).
PmdVector total_pmd_analytic(std::span<const DgdSection> sections,
                             std::span<const Rotation> retarders, double omega0,
                             Referral referral = Referral::input);
PmdVector total_pmd_analytic(std::span<const DgdSection> sections,
                             std::span<const Retarder> retarders, double omega0,
                             Referral referral = Referral::input);

/// The ordered per-section segments whose sum is total_pmd_analytic.
DgdProfile build_profile(std::span<const DgdSection> sections,
                         std::span<const Rotation> retarders, double omega0);
DgdProfile build_profile(std::span<const DgdSection> sections,
                         std::span<const Retarder> retarders, double omega0);

/// Finite-difference PMD read-out at grid index k: the rotation rate of the
/// Stokes-space response around omega_k, as an axis-angle vector in ps.
/// Central differences over k +/- 1, refined with the k +/- 2 pair when the
/// grid provides it. Throws grid_too_coarse when k has no interior
/// neighbours or the measured per-stencil rotation exceeds the trustworthy
/// range. Rotations aliasing past pi per stencil are indistinguishable from
/// small ones; callers must keep spacing * DGD well below that (the default
/// 1 MHz spacing holds to beyond 10 ns of DGD).
PmdVector extract_pmd_fd(std::span<const JonesMatrix> responses, const FrequencyGrid& grid,
                         int k, Referral referral = Referral::input);

/// Slow/fast principal states of a PMD vector.
/// Throws degenerate_pmd below 1e-9 ps: every SOP is principal there.
PspPair psp_pair(const PmdVector& pmd);

/// Group delay (ps) of the launched field at grid index k, from the
/// frequency derivative of the output projection phase
/// arg<v_out(omega_k), v_out(omega)>. Gauge-invariant under global phase.
double launch_group_delay(std::span<const JonesMatrix> responses, const FrequencyGrid& grid,
                          int k, const Jones& input);

/// |d s_out / d omega| of the output SOP at grid index k, in s/rad.
/// Vanishes to first order for a PSP launch.
double sop_frequency_derivative(std::span<const JonesMatrix> responses, const FrequencyGrid& grid,
                                int k, const Jones& input);

/// Finite-difference derivatives of the extracted PMD vector at the grid
/// center, up to `order` (max 4). Requires an odd grid with enough margin.
TaylorCoefficients taylor_fit(std::span<const JonesMatrix> responses, const FrequencyGrid& grid,
                              int order);

/// Truncated series evaluation: sum of derivative[m] (omega-omega0)^m / m!.
PmdVector taylor_eval(const TaylorCoefficients& coeffs, double omega);

}  // namespace pmde
