// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the pmde authors

#pragma once

#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pmde/pmd.hpp"
#include "pmde/scrambler.hpp"

// The full emulator: N DGD sections placed between N+1 scramblers. Each
// scrambler is either a static elliptical retarder or a rotating-waveplate
// trajectory. The emulator holds no clock; every query takes an explicit
// time, so (config, t) determines the channel completely.

namespace pmde {

using ScramblerSetting = std::variant<Retarder, ScramblerTrajectory>;

struct EmulatorConfig {
    std::vector<DgdSection> sections;
    std::vector<ScramblerSetting> scramblers;  // size = sections + 1
    double carrier_hz = default_carrier_hz;
    double scrambler_ceiling = 20.0e6;  // rad/s, Stokes space
    std::string preset_tag;             // empty for custom configs

    double carrier_omega() const { return 2.0 * std::numbers::pi * carrier_hz; }
    double total_section_dgd_ps() const;
};

/// Validated emulator. Immutable; configuration changes make a new state.
class EmulatorState {
public:
    explicit EmulatorState(EmulatorConfig config);

    const EmulatorConfig& config() const { return config_; }
    int section_count() const { return static_cast<int>(config_.sections.size()); }

private:
    EmulatorConfig config_;
};

/// Validates and wraps a configuration.
/// Throws invalid_config on arity violations or negative DGD.
EmulatorState build(EmulatorConfig config);

/// Built-in configurations:
///   "highend-20" | "highend-50" | "highend-100" | "highend-200":
///       two equal sections summing to the named total (ps), three
///       seven-plate scramblers able to reach 20 Mrad/s on the sphere.
///   "zr": two 15 ps sections, scrambler ceiling 50 krad/s.
/// Throws invalid_config for unknown names.
EmulatorConfig preset(std::string_view name);

/// ZR-style configuration from a mean DGD and a max/mean ratio:
/// two equal sections of mean * ratio / 2 each, 50 krad/s scramblers.
EmulatorConfig zr_config(double mean_dgd_ps = 10.0, double max_to_mean_ratio = 3.0);

/// Transfer matrix of one scrambler setting at time t.
JonesMatrix scrambler_jones_at(const ScramblerSetting& s, double t);

/// All scrambler Stokes rotations frozen at time t.
std::vector<Rotation> scrambler_rotations_at(const EmulatorState& state, double t);

/// Channel matrices over the grid with every scrambler frozen at time t.
std::vector<JonesMatrix> response_at(const EmulatorState& state, double t,
                                     const FrequencyGrid& grid);

/// Total PMD vector at the carrier, scramblers frozen at time t.
PmdVector total_pmd_at(const EmulatorState& state, double t,
                       Referral referral = Referral::input);

DgdProfile profile_at(const EmulatorState& state, double t);

/// Static retarder settings that cancel the sections pairwise from the
/// innermost pair outward, leaving a channel with zero PMD of any order
/// (frequency-flat up to a global phase). Requires an even section count
/// with equal DGDs; throws neutral_unavailable otherwise.
std::vector<Retarder> neutral_state(const EmulatorConfig& config);

/// Copy of the configuration with its scramblers replaced by the neutral
/// retarder settings.
EmulatorConfig with_neutral_scramblers(EmulatorConfig config);

/// Total DGD (ps) of two equal sections with a mode converter of
/// retardation delta between them, axis orthogonal to the common PSP axis.
/// Follows the law of cosines: 2 * dgd * |cos(delta/2)|.
double mode_converter_dgd(double section_dgd_ps, double delta);

/// Pointwise matrix-vector product of the frozen channel with a
/// dual-polarization spectrum. Lossless: energy is preserved.
/// Throws length_mismatch when the sample count differs from the grid.
std::vector<Jones> apply_to_signal(const EmulatorState& state, double t,
                                   const FrequencyGrid& grid, std::span<const Jones> spectrum);

}  // namespace pmde
