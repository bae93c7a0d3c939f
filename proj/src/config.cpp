// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the pmde authors

#include "pmde/config.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include <json.hpp>

namespace pmde {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// quantities

struct UnitTable {
    const char* dimension;
    std::map<std::string, double, std::less<>> scale;
};

const UnitTable time_units{"time", {{"ps", 1e-12}, {"ns", 1e-9}, {"us", 1e-6}, {"ms", 1e-3}, {"s", 1.0}}};
const UnitTable dgd_units{"time", {{"ps", 1.0}, {"ns", 1e3}, {"us", 1e6}, {"ms", 1e9}, {"s", 1e12}}};
const UnitTable freq_units{"frequency", {{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}, {"THz", 1e12}}};
const UnitTable rate_units{"rate", {{"rad/s", 1.0}, {"krad/s", 1e3}, {"Mrad/s", 1e6}}};
const UnitTable angle_units{"angle", {{"rad", 1.0}}};

double parse_quantity(std::string_view text, const UnitTable& units) {
    const auto split = text.find(' ');
    if (split == std::string_view::npos)
        fail(ErrorCode::validation_error,
             std::string("physical quantity \"") + std::string(text) +
                 "\" must be written as \"<value> <unit>\"");
    const std::string_view value_part = text.substr(0, split);
    std::string_view unit_part = text.substr(split + 1);
    while (!unit_part.empty() && unit_part.front() == ' ') unit_part.remove_prefix(1);

    double value = 0.0;
    const auto [ptr, ec] =
        std::from_chars(value_part.data(), value_part.data() + value_part.size(), value);
    if (ec != std::errc{} || ptr != value_part.data() + value_part.size())
        fail(ErrorCode::validation_error,
             std::string("cannot parse numeric value in \"") + std::string(text) + "\"");

    const auto it = units.scale.find(unit_part);
    if (it == units.scale.end())
        fail(ErrorCode::validation_error, std::string("\"") + std::string(unit_part) +
                                              "\" is not a valid " + units.dimension + " unit");
    return value * it->second;
}

std::string format_value(double value) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

// Emit in a pretty unit only when the scaled value converts back exactly;
// otherwise fall back to the base unit, keeping round trips lossless.
std::string emit_quantity(double base_value, const char* pretty_unit, double pretty_scale,
                          const char* base_unit) {
    const double scaled = base_value / pretty_scale;
    if (scaled * pretty_scale == base_value)
        return format_value(scaled) + " " + pretty_unit;
    return format_value(base_value) + " " + base_unit;
}

// ---------------------------------------------------------------------------
// json access helpers

[[noreturn]] void bad_field(const std::string& path, const std::string& what) {
    fail(ErrorCode::validation_error, path + ": " + what);
}

void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
    for (const auto& [key, value] : j.items())
        if (!allowed.contains(key)) bad_field(path + "." + key, "unknown field");
}

const json* find(const json& j, const char* key) {
    const auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

std::string require_string(const json& j, const std::string& path) {
    if (!j.is_string()) bad_field(path, "expected a string");
    return j.get<std::string>();
}

double quantity_field(const json& j, const std::string& path, const UnitTable& units) {
    if (j.is_number()) bad_field(path, "physical quantities need a unit, e.g. \"26 ps\"");
    if (!j.is_string()) bad_field(path, "expected a \"<value> <unit>\" string");
    return parse_quantity(j.get<std::string>(), units);
}

std::int64_t integer_field(const json& j, const std::string& path) {
    if (!j.is_number_integer()) bad_field(path, "expected an integer");
    return j.get<std::int64_t>();
}

Stokes axis_field(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() ||
        !j[2].is_number())
        bad_field(path, "expected a 3-element numeric axis");
    Stokes axis{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
    const double n = norm(axis);
    if (std::abs(n - 1.0) > 1e-6) bad_field(path, "axis must have unit length");
    return (1.0 / n) * axis;
}

// ---------------------------------------------------------------------------
// emulator section

BurstProgram parse_burst(const json& j, const std::string& path) {
    check_keys(j, path, {"peak", "duration", "start", "envelope", "axis"});
    BurstProgram burst;
    burst.axis = {0.0, 0.0, 1.0};
    if (const json* v = find(j, "peak")) burst.peak = quantity_field(*v, path + ".peak", rate_units);
    if (const json* v = find(j, "duration"))
        burst.duration = quantity_field(*v, path + ".duration", time_units);
    if (const json* v = find(j, "start")) burst.start = quantity_field(*v, path + ".start", time_units);
    if (const json* v = find(j, "envelope")) {
        const std::string name = require_string(*v, path + ".envelope");
        if (name == "triangular") burst.envelope = BurstEnvelope::triangular;
        else if (name == "raised-cosine") burst.envelope = BurstEnvelope::raised_cosine;
        else bad_field(path + ".envelope", "expected \"triangular\" or \"raised-cosine\"");
    }
    if (const json* v = find(j, "axis")) burst.axis = axis_field(*v, path + ".axis");
    if (!(burst.duration > 0.0)) bad_field(path + ".duration", "burst duration must be positive");
    if (std::abs(burst.peak) > default_burst_rate_limit)
        bad_field(path + ".peak", "burst peak rate exceeds the supported ceiling");
    return burst;
}

ScramblerPlate parse_plate(const json& j, const std::string& path) {
    check_keys(j, path, {"kind", "orientation", "rate", "burst"});
    ScramblerPlate plate;
    const json* kind = find(j, "kind");
    if (!kind) bad_field(path + ".kind", "missing plate kind");
    const std::string name = require_string(*kind, path + ".kind");
    if (name == "qwp") plate.kind = PlateKind::qwp;
    else if (name == "hwp") plate.kind = PlateKind::hwp;
    else bad_field(path + ".kind", "expected \"qwp\" or \"hwp\"");
    if (const json* v = find(j, "orientation"))
        plate.orientation = quantity_field(*v, path + ".orientation", angle_units);
    if (const json* v = find(j, "rate")) plate.rate = quantity_field(*v, path + ".rate", rate_units);
    if (const json* v = find(j, "burst")) plate.burst = parse_burst(*v, path + ".burst");
    return plate;
}

ScramblerSetting parse_scrambler(const json& j, const std::string& path) {
    if (!j.is_object()) bad_field(path, "expected a scrambler object");
    const json* type = find(j, "type");
    if (!type) bad_field(path + ".type", "missing scrambler type");
    const std::string name = require_string(*type, path + ".type");

    if (name == "static") {
        check_keys(j, path, {"type", "axis", "retardation"});
        Retarder r{{1.0, 0.0, 0.0}, 0.0};
        if (const json* v = find(j, "axis")) r.axis = axis_field(*v, path + ".axis");
        if (const json* v = find(j, "retardation"))
            r.retardation = quantity_field(*v, path + ".retardation", angle_units);
        return r;
    }
    if (name == "stack") {
        check_keys(j, path, {"type", "origin", "plates"});
        ScramblerTrajectory traj;
        if (const json* v = find(j, "origin"))
            traj.origin = quantity_field(*v, path + ".origin", time_units);
        const json* plates = find(j, "plates");
        if (!plates || !plates->is_array() || plates->empty())
            bad_field(path + ".plates", "a stack needs at least one plate");
        for (std::size_t i = 0; i < plates->size(); ++i)
            traj.stack.plates.push_back(
                parse_plate((*plates)[i], path + ".plates[" + std::to_string(i) + "]"));
        return traj;
    }
    if (name == "default") {
        check_keys(j, path, {"type", "hwp_rate", "orientation_offset"});
        double hwp_rate = 5.0e6;
        double offset = 0.0;
        if (const json* v = find(j, "hwp_rate"))
            hwp_rate = quantity_field(*v, path + ".hwp_rate", rate_units);
        if (const json* v = find(j, "orientation_offset"))
            offset = quantity_field(*v, path + ".orientation_offset", angle_units);
        return ScramblerTrajectory{seven_plate_stack(hwp_rate, default_qwp_scale, offset), 0.0};
    }
    bad_field(path + ".type", "expected \"static\", \"stack\" or \"default\"");
}

EmulatorConfig parse_emulator(const json& j, const std::string& path) {
    if (!j.is_object()) bad_field(path, "expected an object");
    if (find(j, "preset")) {
        check_keys(j, path, {"preset"});
        return preset(require_string(*find(j, "preset"), path + ".preset"));
    }

    check_keys(j, path, {"sections", "scramblers", "carrier", "scrambler_ceiling"});
    EmulatorConfig cfg;
    const json* sections = find(j, "sections");
    if (!sections || !sections->is_array())
        bad_field(path + ".sections", "expected an array of sections");
    for (std::size_t i = 0; i < sections->size(); ++i) {
        const std::string spath = path + ".sections[" + std::to_string(i) + "]";
        const json& sj = (*sections)[i];
        if (!sj.is_object()) bad_field(spath, "expected a section object");
        check_keys(sj, spath, {"dgd", "axis"});
        DgdSection section;
        const json* dgd = find(sj, "dgd");
        if (!dgd) bad_field(spath + ".dgd", "missing section DGD");
        section.dgd_ps = quantity_field(*dgd, spath + ".dgd", dgd_units);
        if (section.dgd_ps < 0.0) bad_field(spath + ".dgd", "section DGD must be >= 0");
        if (const json* v = find(sj, "axis")) section.axis = axis_field(*v, spath + ".axis");
        cfg.sections.push_back(section);
    }

    if (const json* v = find(j, "carrier"))
        cfg.carrier_hz = quantity_field(*v, path + ".carrier", freq_units);
    if (cfg.carrier_hz <= 0.0) bad_field(path + ".carrier", "carrier frequency must be positive");
    if (const json* v = find(j, "scrambler_ceiling"))
        cfg.scrambler_ceiling = quantity_field(*v, path + ".scrambler_ceiling", rate_units);

    if (const json* v = find(j, "scramblers")) {
        if (!v->is_array()) bad_field(path + ".scramblers", "expected an array");
        for (std::size_t i = 0; i < v->size(); ++i)
            cfg.scramblers.push_back(
                parse_scrambler((*v)[i], path + ".scramblers[" + std::to_string(i) + "]"));
    } else {
        cfg.scramblers.assign(cfg.sections.size() + 1, Retarder{{1.0, 0.0, 0.0}, 0.0});
    }
    if (cfg.scramblers.size() != cfg.sections.size() + 1)
        bad_field(path + ".scramblers", "need exactly sections + 1 scramblers");
    return cfg;
}

// ---------------------------------------------------------------------------
// serialization

json emit_axis(const Stokes& s) { return json::array({s.s1, s.s2, s.s3}); }

json emit_burst(const BurstProgram& b) {
    json j;
    j["peak"] = emit_quantity(b.peak, "Mrad/s", 1e6, "rad/s");
    j["duration"] = emit_quantity(b.duration, "us", 1e-6, "s");
    j["start"] = format_value(b.start) + " s";
    j["envelope"] = b.envelope == BurstEnvelope::triangular ? "triangular" : "raised-cosine";
    j["axis"] = emit_axis(b.axis);
    return j;
}

json emit_scrambler(const ScramblerSetting& s) {
    json j;
    if (std::holds_alternative<Retarder>(s)) {
        const auto& r = std::get<Retarder>(s);
        j["type"] = "static";
        j["axis"] = emit_axis(r.axis);
        j["retardation"] = format_value(r.retardation) + " rad";
        return j;
    }
    const auto& traj = std::get<ScramblerTrajectory>(s);
    j["type"] = "stack";
    j["origin"] = format_value(traj.origin) + " s";
    json plates = json::array();
    for (const auto& p : traj.stack.plates) {
        json pj;
        pj["kind"] = p.kind == PlateKind::hwp ? "hwp" : "qwp";
        pj["orientation"] = format_value(p.orientation) + " rad";
        pj["rate"] = format_value(p.rate) + " rad/s";
        if (p.burst) pj["burst"] = emit_burst(*p.burst);
        plates.push_back(pj);
    }
    j["plates"] = plates;
    return j;
}

json emit_emulator(const EmulatorConfig& cfg) {
    json j;
    if (!cfg.preset_tag.empty()) {
        j["preset"] = cfg.preset_tag;
        return j;
    }
    json sections = json::array();
    for (const auto& s : cfg.sections) {
        json sj;
        sj["dgd"] = format_value(s.dgd_ps) + " ps";
        sj["axis"] = emit_axis(s.axis);
        sections.push_back(sj);
    }
    j["sections"] = sections;
    json scramblers = json::array();
    for (const auto& s : cfg.scramblers) scramblers.push_back(emit_scrambler(s));
    j["scramblers"] = scramblers;
    j["carrier"] = emit_quantity(cfg.carrier_hz, "THz", 1e12, "Hz");
    j["scrambler_ceiling"] = emit_quantity(cfg.scrambler_ceiling, "Mrad/s", 1e6, "rad/s");
    return j;
}

}  // namespace

double parse_time_s(std::string_view text) { return parse_quantity(text, time_units); }
double parse_frequency_hz(std::string_view text) { return parse_quantity(text, freq_units); }
double parse_rate_radps(std::string_view text) { return parse_quantity(text, rate_units); }
double parse_angle_rad(std::string_view text) { return parse_quantity(text, angle_units); }

std::string format_quantity(double value, std::string_view unit) {
    return format_value(value) + " " + std::string(unit);
}

RunConfig parse_config(std::string_view text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        // Map the byte offset to a line/column pair.
        int line = 1, column = 1;
        const std::size_t stop = std::min(text.size(), e.byte > 0 ? e.byte - 1 : 0);
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError(line, column, e.what());
    }
    if (!root.is_object()) fail(ErrorCode::validation_error, "top level must be a JSON object");
    check_keys(root, "config",
               {"emulator", "grid", "time", "seed", "stats", "taylor", "lightning", "sweep",
                "probe"});

    RunConfig cfg;
    if (const json* v = find(root, "emulator")) cfg.emulator = parse_emulator(*v, "emulator");

    const double carrier = cfg.emulator ? cfg.emulator->carrier_hz : default_carrier_hz;
    cfg.grid.center_hz = carrier;
    if (const json* v = find(root, "grid")) {
        check_keys(*v, "grid", {"center", "span", "points"});
        if (const json* c = find(*v, "center"))
            cfg.grid.center_hz = quantity_field(*c, "grid.center", freq_units);
        if (const json* s = find(*v, "span"))
            cfg.grid.span_hz = quantity_field(*s, "grid.span", freq_units);
        if (const json* p = find(*v, "points"))
            cfg.grid.points = static_cast<int>(integer_field(*p, "grid.points"));
        if (cfg.grid.points < 2) bad_field("grid.points", "a grid needs at least 2 points");
        if (!(cfg.grid.span_hz > 0.0)) bad_field("grid.span", "grid span must be positive");
    }

    if (const json* v = find(root, "time")) {
        check_keys(*v, "time", {"start", "step", "count"});
        if (const json* s = find(*v, "start"))
            cfg.time.start = quantity_field(*s, "time.start", time_units);
        if (const json* s = find(*v, "step")) cfg.time.step = quantity_field(*s, "time.step", time_units);
        if (const json* c = find(*v, "count"))
            cfg.time.count = static_cast<int>(integer_field(*c, "time.count"));
        if (cfg.time.count < 1) bad_field("time.count", "time grid needs at least 1 sample");
        if (!(cfg.time.step > 0.0)) bad_field("time.step", "time step must be positive");
    }

    if (const json* v = find(root, "seed")) {
        if (!v->is_number_unsigned() && !v->is_number_integer())
            bad_field("seed", "expected an unsigned integer");
        cfg.seed = v->get<std::uint64_t>();
    }

    if (const json* v = find(root, "stats")) {
        check_keys(*v, "stats", {"samples", "bins", "compare_n_sections"});
        if (const json* s = find(*v, "samples"))
            cfg.stats.samples = static_cast<std::uint64_t>(integer_field(*s, "stats.samples"));
        if (const json* b = find(*v, "bins"))
            cfg.stats.bins = static_cast<int>(integer_field(*b, "stats.bins"));
        if (const json* c = find(*v, "compare_n_sections"))
            cfg.stats.compare_n_sections = static_cast<int>(integer_field(*c, "stats.compare_n_sections"));
        if (cfg.stats.samples < 1) bad_field("stats.samples", "need at least one sample");
        if (cfg.stats.bins < 1) bad_field("stats.bins", "need at least one bin");
        if (cfg.stats.compare_n_sections && *cfg.stats.compare_n_sections < 1)
            bad_field("stats.compare_n_sections", "need at least one section");
    }

    if (const json* v = find(root, "taylor")) {
        check_keys(*v, "taylor", {"orders", "half_band", "points"});
        if (const json* o = find(*v, "orders")) {
            if (!o->is_array() || o->empty()) bad_field("taylor.orders", "expected a non-empty array");
            cfg.taylor.orders.clear();
            for (const auto& e : *o) {
                const auto order = static_cast<int>(integer_field(e, "taylor.orders[]"));
                if (order < 0 || order > 4) bad_field("taylor.orders[]", "orders must be within 0..4");
                cfg.taylor.orders.push_back(order);
            }
        }
        if (const json* b = find(*v, "half_band"))
            cfg.taylor.half_band_hz = quantity_field(*b, "taylor.half_band", freq_units);
        if (const json* p = find(*v, "points"))
            cfg.taylor.points = static_cast<int>(integer_field(*p, "taylor.points"));
        if (!(cfg.taylor.half_band_hz > 0.0)) bad_field("taylor.half_band", "band must be positive");
        if (cfg.taylor.points < 11 || cfg.taylor.points % 2 == 0)
            bad_field("taylor.points", "need an odd point count of at least 11");
    }

    if (const json* v = find(root, "lightning")) {
        check_keys(*v, "lightning", {"peak", "duration", "start", "envelope", "samples", "dt",
                                     "scrambler_index"});
        if (const json* p = find(*v, "peak"))
            cfg.lightning.peak = quantity_field(*p, "lightning.peak", rate_units);
        if (const json* d = find(*v, "duration"))
            cfg.lightning.duration = quantity_field(*d, "lightning.duration", time_units);
        if (const json* s = find(*v, "start"))
            cfg.lightning.start = quantity_field(*s, "lightning.start", time_units);
        if (const json* e = find(*v, "envelope")) {
            const std::string name = require_string(*e, "lightning.envelope");
            if (name == "triangular") cfg.lightning.envelope = BurstEnvelope::triangular;
            else if (name == "raised-cosine") cfg.lightning.envelope = BurstEnvelope::raised_cosine;
            else bad_field("lightning.envelope", "expected \"triangular\" or \"raised-cosine\"");
        }
        if (const json* s = find(*v, "samples"))
            cfg.lightning.samples = static_cast<int>(integer_field(*s, "lightning.samples"));
        if (const json* d = find(*v, "dt")) cfg.lightning.dt = quantity_field(*d, "lightning.dt", time_units);
        if (const json* i = find(*v, "scrambler_index"))
            cfg.lightning.scrambler_index = static_cast<int>(integer_field(*i, "lightning.scrambler_index"));
        if (!(cfg.lightning.duration > 0.0)) bad_field("lightning.duration", "duration must be positive");
        if (cfg.lightning.samples < 2) bad_field("lightning.samples", "need at least 2 trace samples");
        if (!(cfg.lightning.dt > 0.0)) bad_field("lightning.dt", "dt must be positive");
        if (cfg.lightning.scrambler_index < 0)
            bad_field("lightning.scrambler_index", "index must be >= 0");
    }

    if (const json* v = find(root, "sweep")) {
        check_keys(*v, "sweep", {"section_dgd", "points"});
        if (const json* d = find(*v, "section_dgd"))
            cfg.sweep.section_dgd_ps = quantity_field(*d, "sweep.section_dgd", dgd_units);
        if (const json* p = find(*v, "points"))
            cfg.sweep.points = static_cast<int>(integer_field(*p, "sweep.points"));
        if (cfg.sweep.section_dgd_ps < 0.0) bad_field("sweep.section_dgd", "DGD must be >= 0");
        if (cfg.sweep.points < 2) bad_field("sweep.points", "need at least 2 sweep points");
    }

    if (const json* v = find(root, "probe")) {
        check_keys(*v, "probe", {"count", "dt"});
        if (const json* c = find(*v, "count"))
            cfg.probe.count = static_cast<int>(integer_field(*c, "probe.count"));
        if (const json* d = find(*v, "dt")) cfg.probe.dt = quantity_field(*d, "probe.dt", time_units);
        if (cfg.probe.count < 64) bad_field("probe.count", "need at least 64 probe SOPs");
        if (!(cfg.probe.dt > 0.0)) bad_field("probe.dt", "dt must be positive");
    }

    return cfg;
}

std::string serialize(const RunConfig& cfg) {
    json root;
    if (cfg.emulator) root["emulator"] = emit_emulator(*cfg.emulator);
    {
        json grid;
        grid["center"] = emit_quantity(cfg.grid.center_hz, "THz", 1e12, "Hz");
        grid["span"] = emit_quantity(cfg.grid.span_hz, "GHz", 1e9, "Hz");
        grid["points"] = cfg.grid.points;
        root["grid"] = grid;
    }
    {
        json time;
        time["start"] = format_value(cfg.time.start) + " s";
        time["step"] = format_value(cfg.time.step) + " s";
        time["count"] = cfg.time.count;
        root["time"] = time;
    }
    root["seed"] = cfg.seed;
    {
        json stats;
        stats["samples"] = cfg.stats.samples;
        stats["bins"] = cfg.stats.bins;
        if (cfg.stats.compare_n_sections) stats["compare_n_sections"] = *cfg.stats.compare_n_sections;
        root["stats"] = stats;
    }
    {
        json taylor;
        taylor["orders"] = cfg.taylor.orders;
        taylor["half_band"] = emit_quantity(cfg.taylor.half_band_hz, "GHz", 1e9, "Hz");
        taylor["points"] = cfg.taylor.points;
        root["taylor"] = taylor;
    }
    {
        json lightning;
        lightning["peak"] = emit_quantity(cfg.lightning.peak, "Mrad/s", 1e6, "rad/s");
        lightning["duration"] = format_value(cfg.lightning.duration) + " s";
        lightning["start"] = format_value(cfg.lightning.start) + " s";
        lightning["envelope"] =
            cfg.lightning.envelope == BurstEnvelope::triangular ? "triangular" : "raised-cosine";
        lightning["samples"] = cfg.lightning.samples;
        lightning["dt"] = format_value(cfg.lightning.dt) + " s";
        lightning["scrambler_index"] = cfg.lightning.scrambler_index;
        root["lightning"] = lightning;
    }
    {
        json sweep;
        sweep["section_dgd"] = format_value(cfg.sweep.section_dgd_ps) + " ps";
        sweep["points"] = cfg.sweep.points;
        root["sweep"] = sweep;
    }
    {
        json probe;
        probe["count"] = cfg.probe.count;
        probe["dt"] = format_value(cfg.probe.dt) + " s";
        root["probe"] = probe;
    }
    return root.dump(2) + "\n";
}

std::uint64_t config_hash(const RunConfig& cfg) {
    const std::string text = serialize(cfg);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace pmde
