// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the pmde authors

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pmde/config.hpp"

// Command execution: each command wraps one experiment and writes CSV/JSON
// artifacts with bit-stable formatting. Identical configuration and seed
// produce byte-identical files. Every file embeds the config hash and seed
// so a run can be re-identified from its outputs.

namespace pmde {

struct RunResult {
    std::vector<std::string> files;  // paths written, in order
};

inline constexpr const char* command_names[] = {"emulate", "profile", "stats",  "taylor",
                                                "lightning", "neutral", "sweep-fig4"};

bool is_known_command(std::string_view name);

/// Runs a command and writes its artifacts into out_dir (created when
/// missing). Throws pmde::Error subclasses on every failure path.
RunResult run_command(std::string_view name, const RunConfig& cfg, const std::string& out_dir);

/// Fixed 9-significant-digit scientific float formatting used by every CSV
/// export; byte-stable across runs.
std::string csv_number(double value);

}  // namespace pmde
