// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the pmde authors

#include "pmde/pmd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pmde {

namespace {

// Per-step rotation beyond this is no longer a faithful derivative sample.
constexpr double max_step_rotation = 0.2;  // rad over 2*spacing

std::vector<JonesMatrix> to_jones(std::span<const Retarder> retarders) {
    std::vector<JonesMatrix> out;
    out.reserve(retarders.size());
    for (const auto& r : retarders) out.push_back(jones_of(r));
    return out;
}

std::vector<Rotation> to_rotations(std::span<const Retarder> retarders) {
    std::vector<Rotation> out;
    out.reserve(retarders.size());
    for (const auto& r : retarders) out.push_back(rotation_of(r));
    return out;
}

void check_arity(std::size_t sections, std::size_t retarders) {
    if (retarders != sections + 1)
        fail(ErrorCode::arity_mismatch,
             "need " + std::to_string(sections + 1) + " retarders for " +
                 std::to_string(sections) + " sections, got " + std::to_string(retarders));
}

// Axis-angle vector of the relative rotation between two response samples.
PmdVector relative_rotation_vector(const Rotation& later, const Rotation& earlier) {
    const AxisAngle aa = axis_angle_of(later * transpose(earlier));
    return {aa.angle * aa.axis.s1, aa.angle * aa.axis.s2, aa.angle * aa.axis.s3};
}

}  // namespace

int FrequencyGrid::center_index() const {
    validate();
    if (points % 2 == 0)
        fail(ErrorCode::invalid_config, "grid needs an odd point count to have a center sample");
    return points / 2;
}

void FrequencyGrid::validate() const {
    if (points < 2) fail(ErrorCode::invalid_config, "frequency grid needs at least 2 points");
    if (!(span > 0.0) || !std::isfinite(span))
        fail(ErrorCode::invalid_config, "frequency grid span must be positive and finite");
    if (!(center > 0.0) || !std::isfinite(center))
        fail(ErrorCode::invalid_config, "frequency grid center must be positive and finite");
}

JonesMatrix section_jones(const DgdSection& s, double omega) {
    return jones_of(Retarder{s.axis, section_retardation(s, omega)});
}

std::vector<JonesMatrix> cascade_response(std::span<const DgdSection> sections,
                                          std::span<const JonesMatrix> retarders,
                                          const FrequencyGrid& grid) {
    grid.validate();
    check_arity(sections.size(), retarders.size());
    std::vector<JonesMatrix> out;
    out.reserve(static_cast<std::size_t>(grid.points));
    for (int k = 0; k < grid.points; ++k) {
        const double omega = grid.omega(k);
        JonesMatrix j = retarders[0];
        for (std::size_t i = 0; i < sections.size(); ++i) {
            j = section_jones(sections[i], omega) * j;
            j = retarders[i + 1] * j;
        }
        out.push_back(j);
    }
    return out;
}

std::vector<JonesMatrix> cascade_response(std::span<const DgdSection> sections,
                                          std::span<const Retarder> retarders,
                                          const FrequencyGrid& grid) {
    const auto jones = to_jones(retarders);
    return cascade_response(sections, std::span<const JonesMatrix>(jones), grid);
}

PmdVector total_pmd_analytic(std::span<const DgdSection> sections,
                             std::span<const Rotation> retarders, double omega0,
                             Referral referral) {
    check_arity(sections.size(), retarders.size());
    PmdVector total;
    Rotation acc = retarders[0];  // input -> current position, at omega0
    for (std::size_t i = 0; i < sections.size(); ++i) {
        const PmdVector own{sections[i].dgd_ps * sections[i].axis.s1,
                            sections[i].dgd_ps * sections[i].axis.s2,
                            sections[i].dgd_ps * sections[i].axis.s3};
        total = total + transpose(acc) * own;
        acc = rotation_about(sections[i].axis, section_retardation(sections[i], omega0)) * acc;
        acc = retarders[i + 1] * acc;
    }
    if (referral == Referral::output) total = acc * total;
    return total;
}

PmdVector total_pmd_analytic(std::span<const DgdSection> sections,
                             std::span<const Retarder> retarders, double omega0,
                             Referral referral) {
    const auto rot = to_rotations(retarders);
    return total_pmd_analytic(sections, std::span<const Rotation>(rot), omega0, referral);
}

DgdProfile build_profile(std::span<const DgdSection> sections,
                         std::span<const Rotation> retarders, double omega0) {
    check_arity(sections.size(), retarders.size());
    DgdProfile profile;
    profile.omega0 = omega0;
    profile.segments.reserve(sections.size());
    Rotation acc = retarders[0];
    for (std::size_t i = 0; i < sections.size(); ++i) {
        const PmdVector own{sections[i].dgd_ps * sections[i].axis.s1,
                            sections[i].dgd_ps * sections[i].axis.s2,
                            sections[i].dgd_ps * sections[i].axis.s3};
        profile.segments.push_back(transpose(acc) * own);
        acc = rotation_about(sections[i].axis, section_retardation(sections[i], omega0)) * acc;
        acc = retarders[i + 1] * acc;
    }
    return profile;
}

DgdProfile build_profile(std::span<const DgdSection> sections,
                         std::span<const Retarder> retarders, double omega0) {
    const auto rot = to_rotations(retarders);
    return build_profile(sections, std::span<const Rotation>(rot), omega0);
}

PmdVector extract_pmd_fd(std::span<const JonesMatrix> responses, const FrequencyGrid& grid,
                         int k, Referral referral) {
    grid.validate();
    if (static_cast<int>(responses.size()) != grid.points)
        fail(ErrorCode::length_mismatch, "response count does not match the grid");
    if (grid.points < 3 || k < 1 || k > grid.points - 2)
        fail(ErrorCode::grid_too_coarse, "index " + std::to_string(k) +
                                             " has no interior neighbours on a " +
                                             std::to_string(grid.points) + "-point grid");

    const double h = grid.spacing();
    const Rotation r_prev = rotation_of(responses[k - 1]);
    const Rotation r_next = rotation_of(responses[k + 1]);
    const PmdVector w1 = relative_rotation_vector(r_next, r_prev);
    if (norm(w1) > max_step_rotation)
        fail(ErrorCode::grid_too_coarse,
             "rotation across the difference stencil exceeds " +
                 std::to_string(max_step_rotation) + " rad; reduce the grid spacing");

    PmdVector omega_vec = (1.0 / (2.0 * h)) * w1;
    if (k >= 2 && k <= grid.points - 3) {
        // Second estimate at twice the step cancels the O(h^2) term.
        const PmdVector w2 = relative_rotation_vector(rotation_of(responses[k + 2]),
                                                      rotation_of(responses[k - 2]));
        const PmdVector coarse = (1.0 / (4.0 * h)) * w2;
        omega_vec = (1.0 / 3.0) * (4.0 * omega_vec - coarse);
    }

    omega_vec = 1e12 * omega_vec;  // s -> ps
    if (referral == Referral::input) omega_vec = transpose(rotation_of(responses[k])) * omega_vec;
    return omega_vec;
}

PspPair psp_pair(const PmdVector& pmd) {
    const double dgd = norm(pmd);
    if (dgd < 1e-9)
        fail(ErrorCode::degenerate_pmd, "|PMD| < 1e-9 ps: principal states are undefined");
    const Stokes slow{pmd.s1 / dgd, pmd.s2 / dgd, pmd.s3 / dgd};
    return {slow, -slow, dgd};
}

double launch_group_delay(std::span<const JonesMatrix> responses, const FrequencyGrid& grid,
                          int k, const Jones& input) {
    grid.validate();
    if (static_cast<int>(responses.size()) != grid.points)
        fail(ErrorCode::length_mismatch, "response count does not match the grid");
    if (grid.points < 3 || k < 1 || k > grid.points - 2)
        fail(ErrorCode::grid_too_coarse, "launch_group_delay needs an interior grid index");

    const Jones ref = responses[k] * input;
    const Jones next = responses[k + 1] * input;
    const Jones prev = responses[k - 1] * input;
    const double phase_next = std::arg(inner(ref, next));
    const double phase_prev = std::arg(inner(ref, prev));
    const double delay_s = -(phase_next - phase_prev) / (2.0 * grid.spacing());
    return delay_s * 1e12;
}

double sop_frequency_derivative(std::span<const JonesMatrix> responses, const FrequencyGrid& grid,
                                int k, const Jones& input) {
    grid.validate();
    if (static_cast<int>(responses.size()) != grid.points)
        fail(ErrorCode::length_mismatch, "response count does not match the grid");
    if (grid.points < 3 || k < 1 || k > grid.points - 2)
        fail(ErrorCode::grid_too_coarse, "sop_frequency_derivative needs an interior grid index");

    const Stokes next = stokes_of(normalized(responses[k + 1] * input));
    const Stokes prev = stokes_of(normalized(responses[k - 1] * input));
    return norm(next - prev) / (2.0 * grid.spacing());
}

TaylorCoefficients taylor_fit(std::span<const JonesMatrix> responses, const FrequencyGrid& grid,
                              int order) {
    if (order < 0 || order > 4)
        fail(ErrorCode::invalid_config, "taylor_fit supports orders 0..4");
    const int c = grid.center_index();
    const int stencil_half = order >= 3 ? 2 : 1;
    const int margin = stencil_half + 2;  // extraction itself wants k +/- 2
    if (c - margin < 0 || c + margin >= grid.points)
        fail(ErrorCode::grid_too_coarse, "grid too small for the requested derivative order");

    PmdVector w[5];  // extracted PMD vector at c-2 .. c+2
    for (int j = -stencil_half; j <= stencil_half; ++j)
        w[j + 2] = extract_pmd_fd(responses, grid, c + j, Referral::input);

    const double h = grid.spacing();
    TaylorCoefficients out;
    out.omega0 = grid.omega(c);
    out.derivative.push_back(w[2]);
    if (order >= 1) out.derivative.push_back((1.0 / (2.0 * h)) * (w[3] - w[1]));
    if (order >= 2) out.derivative.push_back((1.0 / (h * h)) * (w[3] - 2.0 * w[2] + w[1]));
    if (order >= 3)
        out.derivative.push_back((1.0 / (2.0 * h * h * h)) *
                                 ((w[4] - w[0]) - 2.0 * (w[3] - w[1])));
    if (order >= 4)
        out.derivative.push_back((1.0 / (h * h * h * h)) *
                                 ((w[4] + w[0]) - 4.0 * (w[3] + w[1]) + 6.0 * w[2]));
    return out;
}

PmdVector taylor_eval(const TaylorCoefficients& coeffs, double omega) {
    const double d = omega - coeffs.omega0;
    PmdVector sum;
    double term = 1.0;  // d^m / m!
    for (std::size_t m = 0; m < coeffs.derivative.size(); ++m) {
        if (m > 0) term *= d / static_cast<double>(m);
        sum = sum + term * coeffs.derivative[m];
    }
    return sum;
}

}  // namespace pmde
