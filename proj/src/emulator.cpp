// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the pmde authors

#include "pmde/emulator.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace pmde {

namespace {

constexpr double pi = std::numbers::pi;

// Slight per-scrambler slowdown so rates stay incommensurate across the
// N+1 scramblers, never exceeding the index-0 budget.
double detune(int scrambler_index) {
    return 1.0 / (1.0 + scrambler_index * (std::sqrt(17.0) - 4.0) / 8.0);
}

ScramblerTrajectory make_scrambler(double hwp_rate, int index) {
    const double golden = pi * (3.0 - std::sqrt(5.0));
    return {seven_plate_stack(hwp_rate * detune(index), default_qwp_scale, golden * (index + 1)),
            0.0};
}

EmulatorConfig highend(double total_dgd_ps) {
    EmulatorConfig cfg;
    cfg.sections = {{total_dgd_ps / 2.0, {1.0, 0.0, 0.0}}, {total_dgd_ps / 2.0, {1.0, 0.0, 0.0}}};
    cfg.scrambler_ceiling = 20.0e6;
    // HWP at 5 Mrad/s physical = 20 Mrad/s on the sphere; QWPs trail by
    // more than two orders of magnitude.
    for (int i = 0; i < 3; ++i) cfg.scramblers.emplace_back(make_scrambler(5.0e6, i));
    return cfg;
}

}  // namespace

double EmulatorConfig::total_section_dgd_ps() const {
    double sum = 0.0;
    for (const auto& s : sections) sum += s.dgd_ps;
    return sum;
}

EmulatorState::EmulatorState(EmulatorConfig config) : config_(std::move(config)) {
    if (config_.scramblers.size() != config_.sections.size() + 1)
        fail(ErrorCode::invalid_config,
             "need " + std::to_string(config_.sections.size() + 1) + " scramblers for " +
                 std::to_string(config_.sections.size()) + " sections, got " +
                 std::to_string(config_.scramblers.size()));
    for (const auto& s : config_.sections) {
        if (!(s.dgd_ps >= 0.0) || !std::isfinite(s.dgd_ps))
            fail(ErrorCode::invalid_config, "section DGD must be finite and >= 0");
        if (std::abs(norm(s.axis) - 1.0) > 1e-9)
            fail(ErrorCode::invalid_config, "section PSP axis must have unit length");
    }
    if (!(config_.carrier_hz > 0.0))
        fail(ErrorCode::invalid_config, "carrier frequency must be positive");
}

EmulatorState build(EmulatorConfig config) { return EmulatorState(std::move(config)); }

EmulatorConfig preset(std::string_view name) {
    EmulatorConfig cfg;
    if (name == "highend-20") cfg = highend(20.0);
    else if (name == "highend-50") cfg = highend(50.0);
    else if (name == "highend-100") cfg = highend(100.0);
    else if (name == "highend-200") cfg = highend(200.0);
    else if (name == "zr") cfg = zr_config();
    else fail(ErrorCode::invalid_config, "unknown preset \"" + std::string(name) + "\"");
    cfg.preset_tag = std::string(name);
    return cfg;
}

EmulatorConfig zr_config(double mean_dgd_ps, double max_to_mean_ratio) {
    if (!(mean_dgd_ps > 0.0) || !(max_to_mean_ratio > 0.0))
        fail(ErrorCode::invalid_config, "zr_config needs positive mean DGD and ratio");
    EmulatorConfig cfg;
    const double per_section = mean_dgd_ps * max_to_mean_ratio / 2.0;
    cfg.sections = {{per_section, {1.0, 0.0, 0.0}}, {per_section, {1.0, 0.0, 0.0}}};
    cfg.scrambler_ceiling = 50.0e3;
    // Budget the whole stack (HWP + six QWPs) under the ceiling.
    const double bound_per_unit_rate = stack_speed_bound(seven_plate_stack(1.0));
    const double hwp_rate = 0.995 * cfg.scrambler_ceiling / bound_per_unit_rate;
    for (int i = 0; i < 3; ++i) cfg.scramblers.emplace_back(make_scrambler(hwp_rate, i));
    cfg.preset_tag = "zr";
    return cfg;
}

JonesMatrix scrambler_jones_at(const ScramblerSetting& s, double t) {
    if (std::holds_alternative<Retarder>(s)) return jones_of(std::get<Retarder>(s));
    return scrambler_at(std::get<ScramblerTrajectory>(s), t);
}

std::vector<Rotation> scrambler_rotations_at(const EmulatorState& state, double t) {
    std::vector<Rotation> out;
    out.reserve(state.config().scramblers.size());
    for (const auto& s : state.config().scramblers)
        out.push_back(rotation_of(scrambler_jones_at(s, t)));
    return out;
}

std::vector<JonesMatrix> response_at(const EmulatorState& state, double t,
                                     const FrequencyGrid& grid) {
    std::vector<JonesMatrix> frozen;
    frozen.reserve(state.config().scramblers.size());
    for (const auto& s : state.config().scramblers) frozen.push_back(scrambler_jones_at(s, t));
    return cascade_response(state.config().sections, frozen, grid);
}

PmdVector total_pmd_at(const EmulatorState& state, double t, Referral referral) {
    const auto rotations = scrambler_rotations_at(state, t);
    return total_pmd_analytic(state.config().sections, rotations,
                              state.config().carrier_omega(), referral);
}

DgdProfile profile_at(const EmulatorState& state, double t) {
    const auto rotations = scrambler_rotations_at(state, t);
    return build_profile(state.config().sections, rotations, state.config().carrier_omega());
}

std::vector<Retarder> neutral_state(const EmulatorConfig& config) {
    const auto& sections = config.sections;
    const int n = static_cast<int>(sections.size());
    if (n == 0 || n % 2 != 0)
        fail(ErrorCode::neutral_unavailable, "neutral state needs an even, non-zero section count");
    for (int i = 1; i < n; ++i)
        if (std::abs(sections[i].dgd_ps - sections[0].dgd_ps) > 1e-12)
            fail(ErrorCode::neutral_unavailable, "neutral state needs equal section DGDs");

    // Work from the innermost pair outward. The retarder between a paired
    // pair maps the first section's slow PSP onto the second's fast PSP;
    // that makes the pair frequency-flat with the pairing rotation as its
    // net effect. Outer levels see the flattened inner block as a fixed
    // rotation and compensate it through their leading retarder.
    std::vector<Rotation> settings(static_cast<std::size_t>(n) + 1, Rotation::identity());
    Rotation inner = Rotation::identity();
    for (int level = 1; level <= n / 2; ++level) {
        const int a = n / 2 - level + 1;  // 1-based section indices
        const int b = n / 2 + level;
        const Rotation target =
            rotation_aligning(sections[static_cast<std::size_t>(a) - 1].axis,
                              -sections[static_cast<std::size_t>(b) - 1].axis);
        if (level == 1) {
            settings[static_cast<std::size_t>(a)] = target;
        } else {
            settings[static_cast<std::size_t>(b) - 1] = Rotation::identity();
            settings[static_cast<std::size_t>(a)] = transpose(inner) * target;
        }
        inner = target;
    }

    std::vector<Retarder> out;
    out.reserve(settings.size());
    for (const auto& r : settings) {
        const AxisAngle aa = axis_angle_of(r);
        out.push_back({aa.axis, reduce_angle(aa.angle)});
    }
    return out;
}

EmulatorConfig with_neutral_scramblers(EmulatorConfig config) {
    const auto retarders = neutral_state(config);
    config.scramblers.clear();
    for (const auto& r : retarders) config.scramblers.emplace_back(r);
    config.preset_tag.clear();
    return config;
}

double mode_converter_dgd(double section_dgd_ps, double delta) {
    const DgdSection section{section_dgd_ps, {1.0, 0.0, 0.0}};
    const std::vector<DgdSection> sections{section, section};
    const std::vector<Retarder> retarders{{{1.0, 0.0, 0.0}, 0.0},
                                          {{0.0, 0.0, 1.0}, delta},
                                          {{1.0, 0.0, 0.0}, 0.0}};
    return norm(total_pmd_analytic(sections, retarders, 2.0 * pi * default_carrier_hz));
}

std::vector<Jones> apply_to_signal(const EmulatorState& state, double t,
                                   const FrequencyGrid& grid, std::span<const Jones> spectrum) {
    if (static_cast<int>(spectrum.size()) != grid.points)
        fail(ErrorCode::length_mismatch, "spectrum sample count does not match the grid");
    const auto responses = response_at(state, t, grid);
    std::vector<Jones> out;
    out.reserve(spectrum.size());
    for (std::size_t k = 0; k < spectrum.size(); ++k) out.push_back(responses[k] * spectrum[k]);
    return out;
}

}  // namespace pmde
