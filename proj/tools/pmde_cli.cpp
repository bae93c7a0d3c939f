// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the pmde authors

// Command-line front end. Talks to the library exclusively through the C
// interface in pmde.h.
//
//   pmde <command> --config <file> [--out <dir>] [--seed <u64>]
//
// Exit codes: 0 success, 1 configuration/validation failure, 2 runtime
// failure. Failures print a machine-readable JSON record on stderr.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "pmde.h"

namespace {

int exit_code_of(pmde_status status) {
    switch (status) {
        case PMDE_OK:
            return 0;
        case PMDE_ERROR_PARSE:
        case PMDE_ERROR_VALIDATION:
        case PMDE_ERROR_INVALID_CONFIG:
        case PMDE_ERROR_ARITY_MISMATCH:
        case PMDE_ERROR_LENGTH_MISMATCH:
        case PMDE_ERROR_NEUTRAL_UNAVAILABLE:
        case PMDE_ERROR_DEGENERATE_PMD:
        case PMDE_ERROR_INVALID_ARGUMENT:
            return 1;
        default:
            return 2;
    }
}

std::string json_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size() + 8);
    for (char c : text) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

int report_failure(pmde_status status) {
    std::cerr << "{\"error\": {\"status\": \"" << pmde_status_name(status) << "\", \"message\": \""
              << json_escape(pmde_last_error()) << "\"}}\n";
    return exit_code_of(status);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pmde - polarization mode dispersion emulator simulator"};
    app.require_subcommand(1);

    const char* const commands[] = {"emulate", "profile", "stats",     "taylor",
                                    "lightning", "neutral", "sweep-fig4"};
    const char* const descriptions[] = {
        "export channel matrices over time and frequency",
        "export the DGD profile and principal states",
        "Monte-Carlo DGD statistics under random scrambler states",
        "accuracy of the truncated Taylor model versus the exact channel",
        "burst demonstration: speed trace and SOP return",
        "compute and verify the neutral (zero-PMD) retarder settings",
        "total DGD versus mode-converter retardation between two equal sections"};

    std::string config_path;
    std::string out_dir = ".";
    unsigned long long seed = 0;
    bool seed_set = false;

    for (std::size_t i = 0; i < std::size(commands); ++i) {
        CLI::App* sub = app.add_subcommand(commands[i], descriptions[i]);
        sub->add_option("--config", config_path, "configuration file (JSON)")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory (default: current)");
        sub->add_option("--seed", seed, "override the configured random seed")
            ->each([&seed_set](const std::string&) { seed_set = true; });
    }

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    std::ifstream file(config_path, std::ios::binary);
    if (!file) {
        std::cerr << "{\"error\": {\"status\": \"PMDE_ERROR_IO\", \"message\": \"cannot read "
                  << json_escape(config_path) << "\"}}\n";
        return 2;
    }
    std::ostringstream text;
    text << file.rdbuf();

    const pmde_status status =
        pmde_run_command(command.c_str(), text.str().c_str(), out_dir.c_str(),
                         seed_set ? 1 : 0, seed);
    if (status != PMDE_OK) return report_failure(status);
    std::cout << "pmde " << command << ": artifacts written to " << out_dir << "\n";
    return 0;
}
