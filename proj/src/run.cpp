// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the pmde authors

#include "pmde/run.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "pmde/statistics.hpp"

namespace pmde {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double pi = std::numbers::pi;

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const fs::path& path, std::string_view command, const RunConfig& cfg)
        : path_(path.string()) {
        out_ << "# pmde " << command << "\n";
        out_ << "# config_hash=" << hash_hex(config_hash(cfg)) << " seed=" << cfg.seed << "\n";
    }

    void header(std::string_view columns) { out_ << columns << "\n"; }

    CsvWriter& field(double v) {
        sep();
        out_ << csv_number(v);
        return *this;
    }
    CsvWriter& field(std::uint64_t v) {
        sep();
        out_ << v;
        return *this;
    }
    void endrow() {
        out_ << "\n";
        first_ = true;
    }

    std::string write() {
        std::ofstream file(path_, std::ios::binary);
        if (!file) fail(ErrorCode::io_error, "cannot open \"" + path_ + "\" for writing");
        file << out_.str();
        if (!file) fail(ErrorCode::io_error, "failed writing \"" + path_ + "\"");
        return path_;
    }

private:
    void sep() {
        if (!first_) out_ << ",";
        first_ = false;
    }

    std::string path_;
    std::ostringstream out_;
    bool first_ = true;
};

json meta_of(std::string_view command, const RunConfig& cfg) {
    json meta;
    meta["command"] = std::string(command);
    meta["config_hash"] = hash_hex(config_hash(cfg));
    meta["seed"] = cfg.seed;
    return meta;
}

std::string write_json(const fs::path& path, const json& j) {
    std::ofstream file(path, std::ios::binary);
    if (!file) fail(ErrorCode::io_error, "cannot open \"" + path.string() + "\" for writing");
    file << j.dump(2) << "\n";
    if (!file) fail(ErrorCode::io_error, "failed writing \"" + path.string() + "\"");
    return path.string();
}

const EmulatorConfig& require_emulator(const RunConfig& cfg, std::string_view command) {
    if (!cfg.emulator)
        fail(ErrorCode::validation_error,
             "command \"" + std::string(command) + "\" needs an \"emulator\" section");
    return *cfg.emulator;
}

json pmd_json(const PmdVector& v) {
    json j;
    j["s1_ps"] = v.s1;
    j["s2_ps"] = v.s2;
    j["s3_ps"] = v.s3;
    j["dgd_ps"] = norm(v);
    return j;
}

// ---------------------------------------------------------------------------
// commands

RunResult cmd_emulate(const RunConfig& cfg, const fs::path& dir) {
    const EmulatorState state = build(require_emulator(cfg, "emulate"));
    const FrequencyGrid grid = cfg.grid.angular();
    grid.validate();

    CsvWriter csv(dir / "emulate.csv", "emulate", cfg);
    csv.header("time_s,freq_thz,jxx_re,jxx_im,jxy_re,jxy_im,jyx_re,jyx_im,jyy_re,jyy_im");
    for (int it = 0; it < cfg.time.count; ++it) {
        const double t = cfg.time.start + it * cfg.time.step;
        const auto responses = response_at(state, t, grid);
        for (int k = 0; k < grid.points; ++k) {
            const JonesMatrix& j = responses[static_cast<std::size_t>(k)];
            csv.field(t)
                .field(grid.omega(k) / (2.0 * pi) / 1e12)
                .field(j.xx.real())
                .field(j.xx.imag())
                .field(j.xy.real())
                .field(j.xy.imag())
                .field(j.yx.real())
                .field(j.yx.imag())
                .field(j.yy.real())
                .field(j.yy.imag());
            csv.endrow();
        }
    }
    return {{csv.write()}};
}

RunResult cmd_profile(const RunConfig& cfg, const fs::path& dir) {
    const EmulatorState state = build(require_emulator(cfg, "profile"));
    json out;
    out["meta"] = meta_of("profile", cfg);
    out["carrier_thz"] = state.config().carrier_hz / 1e12;
    json profiles = json::array();
    for (int it = 0; it < cfg.time.count; ++it) {
        const double t = cfg.time.start + it * cfg.time.step;
        const DgdProfile profile = profile_at(state, t);
        json pj;
        pj["time_s"] = t;
        json segments = json::array();
        for (const auto& seg : profile.segments) segments.push_back(pmd_json(seg));
        pj["segments"] = segments;
        const PmdVector total = profile.total();
        pj["total"] = pmd_json(total);
        if (norm(total) >= 1e-9) {
            const PspPair psp = psp_pair(total);
            pj["psp_slow"] = json::array({psp.slow.s1, psp.slow.s2, psp.slow.s3});
            pj["psp_fast"] = json::array({psp.fast.s1, psp.fast.s2, psp.fast.s3});
        } else {
            pj["degenerate"] = true;
        }
        profiles.push_back(pj);
    }
    out["profiles"] = profiles;
    return {{write_json(dir / "profile.json", out)}};
}

RunResult cmd_stats(const RunConfig& cfg, const fs::path& dir) {
    const EmulatorConfig& emulator = require_emulator(cfg, "stats");
    if (emulator.sections.empty())
        fail(ErrorCode::invalid_config, "stats needs at least one DGD section");
    const double omega0 = emulator.carrier_omega();

    RunResult result;
    json summary;
    summary["meta"] = meta_of("stats", cfg);
    summary["samples"] = cfg.stats.samples;

    const auto write_hist = [&](const DgdHistogram& hist, const char* filename) {
        CsvWriter csv(dir / filename, "stats", cfg);
        csv.header("bin_lo_ps,bin_hi_ps,count");
        for (std::size_t b = 0; b + 1 < hist.edges_ps.size(); ++b) {
            csv.field(hist.edges_ps[b]).field(hist.edges_ps[b + 1]).field(hist.counts[b]);
            csv.endrow();
        }
        result.files.push_back(csv.write());
    };

    const auto hist_summary = [](const DgdHistogram& hist) {
        json j;
        j["mean_ps"] = hist.mean_ps;
        j["rms_ps"] = hist.rms_ps;
        j["mean_over_rms"] = hist.rms_ps > 0.0 ? hist.mean_ps / hist.rms_ps : 0.0;
        j["max_ps"] = hist.max_ps;
        return j;
    };

    if (cfg.stats.compare_n_sections) {
        const int n = *cfg.stats.compare_n_sections;
        const double total = emulator.total_section_dgd_ps();
        std::vector<DgdSection> other(static_cast<std::size_t>(n),
                                      DgdSection{total / n, {1.0, 0.0, 0.0}});
        const PairedDgdHistograms pair =
            hinge_vs_uniform(emulator.sections, other, omega0, cfg.stats.samples, cfg.seed,
                             cfg.stats.bins);
        write_hist(pair.first, "dgd_hist.csv");
        write_hist(pair.second, "dgd_hist_compare.csv");
        summary["first"] = hist_summary(pair.first);
        summary["second"] = hist_summary(pair.second);
        summary["two_sample_ks"] = pair.ks;
    } else {
        const DgdHistogram hist =
            sample_dgd(emulator.sections, omega0, cfg.stats.samples, cfg.seed, cfg.stats.bins);
        write_hist(hist, "dgd_hist.csv");
        summary["histogram"] = hist_summary(hist);
        // Single-parameter Maxwell fit through the rms.
        if (hist.rms_ps > 0.0) {
            const double sigma = hist.rms_ps / std::sqrt(3.0);
            const auto values =
                sample_dgd_values(emulator.sections, omega0, cfg.stats.samples, cfg.seed);
            summary["maxwell_ks"] =
                ks_distance(values, [sigma](double x) { return maxwell_cdf(x, sigma); });
        }
    }
    result.files.push_back(write_json(dir / "dgd_stats.json", summary));
    return result;
}

RunResult cmd_taylor(const RunConfig& cfg, const fs::path& dir) {
    const EmulatorState state = build(require_emulator(cfg, "taylor"));
    const auto retarders = scrambler_rotations_at(state, cfg.time.start);
    const ModelErrorReport report = taylor_accuracy(
        state.config().sections, retarders, state.config().carrier_omega(),
        2.0 * pi * cfg.taylor.half_band_hz, cfg.taylor.points, cfg.taylor.orders);

    RunResult result;
    CsvWriter csv(dir / "model_error.csv", "taylor", cfg);
    std::string columns = "freq_thz";
    for (int order : report.orders) columns += ",err_order" + std::to_string(order) + "_ps";
    columns += ",exact_ps";
    csv.header(columns);
    for (std::size_t k = 0; k < report.omega.size(); ++k) {
        csv.field(report.omega[k] / (2.0 * pi) / 1e12);
        for (std::size_t o = 0; o < report.orders.size(); ++o) csv.field(report.error_ps[o][k]);
        csv.field(0.0);  // the exact finite-section model is the zero-error baseline
        csv.endrow();
    }
    result.files.push_back(csv.write());

    json summary;
    summary["meta"] = meta_of("taylor", cfg);
    summary["orders"] = report.orders;
    summary["taylor_dof"] = report.taylor_dof;
    summary["exact_dof"] = report.exact_dof;
    summary["max_error_ps"] = report.max_error_ps;
    summary["exact_max_error_ps"] = 0.0;
    result.files.push_back(write_json(dir / "taylor_report.json", summary));
    return result;
}

RunResult cmd_lightning(const RunConfig& cfg, const fs::path& dir) {
    // Host stack: the selected emulator scrambler when it is a waveplate
    // stack, otherwise a static seven-plate stack. The burst rides on the
    // HWP.
    ScramblerTrajectory traj{seven_plate_stack(0.0), 0.0};
    if (cfg.emulator) {
        const auto idx = static_cast<std::size_t>(cfg.lightning.scrambler_index);
        if (idx >= cfg.emulator->scramblers.size())
            fail(ErrorCode::validation_error, "lightning.scrambler_index is out of range");
        const ScramblerSetting& setting = cfg.emulator->scramblers[idx];
        if (std::holds_alternative<ScramblerTrajectory>(setting))
            traj = std::get<ScramblerTrajectory>(setting);
    }
    const BurstProgram burst = make_lightning_burst(cfg.lightning.peak, cfg.lightning.duration,
                                                    cfg.lightning.start, cfg.lightning.envelope);
    bool attached = false;
    for (auto& plate : traj.stack.plates) {
        if (plate.kind == PlateKind::hwp) {
            plate.burst = burst;
            attached = true;
            break;
        }
    }
    if (!attached)
        fail(ErrorCode::invalid_config, "lightning needs a stack with at least one HWP");

    const Stokes probe_in{1.0, 0.0, 0.0};
    const Stokes before = rotation_of(scrambler_at(traj, cfg.lightning.start)) * probe_in;

    // Clamp the measurement step so the probe arc stays in the trusted
    // range even when a fast host stack and the burst peak combine.
    const double speed_bound = stack_speed_bound(traj.stack) + std::abs(cfg.lightning.peak);
    double dt = cfg.lightning.dt;
    if (speed_bound > 0.0) dt = std::min(dt, 0.05 / speed_bound);

    RunResult result;
    CsvWriter csv(dir / "speed_trace.csv", "lightning", cfg);
    csv.header("time_s,max_speed_radps,sop_s1,sop_s2,sop_s3");
    double measured_peak = 0.0;
    const double window = cfg.lightning.duration * 1.2;
    const double t0 = cfg.lightning.start - cfg.lightning.duration * 0.1;
    for (int i = 0; i < cfg.lightning.samples; ++i) {
        const double t = t0 + window * i / (cfg.lightning.samples - 1);
        const double speed = max_sop_speed(traj, t, dt, cfg.probe.count);
        measured_peak = std::max(measured_peak, speed);
        const Stokes sop = rotation_of(scrambler_at(traj, t)) * probe_in;
        csv.field(t).field(speed).field(sop.s1).field(sop.s2).field(sop.s3);
        csv.endrow();
    }
    result.files.push_back(csv.write());

    // Both envelope apexes sit at a quarter and three quarters of the
    // burst; probe them directly so the reported peak does not depend on
    // the trace sampling.
    for (double frac : {0.25, 0.75}) {
        const double t_apex = cfg.lightning.start + frac * cfg.lightning.duration;
        measured_peak = std::max(
            measured_peak, max_sop_speed(traj, t_apex - dt / 2.0, dt, cfg.probe.count));
    }

    const double t_end = cfg.lightning.start + cfg.lightning.duration;
    const Stokes after = rotation_of(scrambler_at(traj, t_end)) * probe_in;
    json summary;
    summary["meta"] = meta_of("lightning", cfg);
    summary["peak_radps"] = cfg.lightning.peak;
    summary["measured_peak_radps"] = measured_peak;
    summary["dt_s"] = dt;
    summary["sop_return_angle_rad"] = angle_between(before, after);
    result.files.push_back(write_json(dir / "lightning.json", summary));
    return result;
}

RunResult cmd_neutral(const RunConfig& cfg, const fs::path& dir) {
    const EmulatorConfig& emulator = require_emulator(cfg, "neutral");
    const auto settings = neutral_state(emulator);

    // Verify the settings: the channel must be frequency-flat. The margin
    // keeps the refined extraction stencil inside the grid so the checked
    // band still spans +/- 1 THz.
    const EmulatorState state = build(with_neutral_scramblers(emulator));
    const FrequencyGrid grid =
        FrequencyGrid::centered(emulator.carrier_omega(), 2.0 * pi * 1.1e12, 22);
    const auto responses = response_at(state, 0.0, grid);
    double worst = 0.0;
    for (int k = 2; k <= grid.points - 3; ++k)
        worst = std::max(worst, norm(extract_pmd_fd(responses, grid, k)));

    json out;
    out["meta"] = meta_of("neutral", cfg);
    json retarders = json::array();
    for (const auto& r : settings) {
        json rj;
        rj["axis"] = json::array({r.axis.s1, r.axis.s2, r.axis.s3});
        rj["retardation_rad"] = r.retardation;
        retarders.push_back(rj);
    }
    out["retarders"] = retarders;
    out["verification"] = {{"half_band_thz", 1.0}, {"max_abs_pmd_ps", worst}};
    return {{write_json(dir / "neutral.json", out)}};
}

RunResult cmd_sweep_fig4(const RunConfig& cfg, const fs::path& dir) {
    CsvWriter csv(dir / "sweep_fig4.csv", "sweep-fig4", cfg);
    csv.header("delta_rad,dgd_ps");
    const int n = cfg.sweep.points;
    for (int i = 0; i < n; ++i) {
        const double delta = pi * i / (n - 1);
        csv.field(delta).field(mode_converter_dgd(cfg.sweep.section_dgd_ps, delta));
        csv.endrow();
    }
    return {{csv.write()}};
}

}  // namespace

bool is_known_command(std::string_view name) {
    return std::any_of(std::begin(command_names), std::end(command_names),
                       [&](const char* c) { return name == c; });
}

std::string csv_number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.8e", value);
    return buf;
}

RunResult run_command(std::string_view name, const RunConfig& cfg, const std::string& out_dir) {
    if (!is_known_command(name))
        fail(ErrorCode::invalid_config, "unknown command \"" + std::string(name) + "\"");
    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorCode::io_error, "cannot create output directory \"" + out_dir + "\"");

    if (name == "emulate") return cmd_emulate(cfg, dir);
    if (name == "profile") return cmd_profile(cfg, dir);
    if (name == "stats") return cmd_stats(cfg, dir);
    if (name == "taylor") return cmd_taylor(cfg, dir);
    if (name == "lightning") return cmd_lightning(cfg, dir);
    if (name == "neutral") return cmd_neutral(cfg, dir);
    return cmd_sweep_fig4(cfg, dir);
}

}  // namespace pmde
