// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the pmde authors

#include <doctest.h>

#include <string>

#include "pmde/config.hpp"

using namespace pmde;

TEST_CASE("minimal preset config materializes the preset") {
    const RunConfig cfg = parse_config(R"({"emulator": {"preset": "highend-100"}})");
    REQUIRE(cfg.emulator.has_value());
    REQUIRE(cfg.emulator->sections.size() == 2);
    CHECK(cfg.emulator->sections[0].dgd_ps == doctest::Approx(50.0));
    CHECK(cfg.emulator->sections[1].dgd_ps == doctest::Approx(50.0));
    CHECK(cfg.emulator->preset_tag == "highend-100");
    // Defaults materialize.
    CHECK(cfg.emulator->carrier_hz == doctest::Approx(193.4e12));
    CHECK(cfg.grid.center_hz == doctest::Approx(193.4e12));
    CHECK(cfg.seed == 0);
    CHECK(cfg.stats.samples == 100000);
}

TEST_CASE("explicit emulator parsing") {
    const RunConfig cfg = parse_config(R"({
      "emulator": {
        "sections": [{"dgd": "26 ps"}, {"dgd": "26 ps", "axis": [0, 1, 0]}],
        "scramblers": [
          {"type": "static"},
          {"type": "static", "axis": [0, 0, 1], "retardation": "3.14159 rad"},
          {"type": "stack", "plates": [
            {"kind": "hwp", "orientation": "0.5 rad", "rate": "5 Mrad/s",
             "burst": {"peak": "20 Mrad/s", "duration": "10 us", "start": "1 us"}}
          ]}
        ]
      },
      "seed": 17
    })");
    REQUIRE(cfg.emulator.has_value());
    const EmulatorConfig& e = *cfg.emulator;
    CHECK(e.sections[0].dgd_ps == 26.0);
    CHECK(e.sections[0].axis.s1 == 1.0);  // default axis
    CHECK(e.sections[1].axis.s2 == 1.0);
    CHECK(std::get<Retarder>(e.scramblers[1]).retardation == doctest::Approx(3.14159));
    const auto& traj = std::get<ScramblerTrajectory>(e.scramblers[2]);
    REQUIRE(traj.stack.plates.size() == 1);
    CHECK(traj.stack.plates[0].rate == doctest::Approx(5.0e6));
    REQUIRE(traj.stack.plates[0].burst.has_value());
    CHECK(traj.stack.plates[0].burst->peak == doctest::Approx(20.0e6));
    CHECK(traj.stack.plates[0].burst->duration == doctest::Approx(10e-6));
    CHECK(cfg.seed == 17);
}

TEST_CASE("omitted scramblers default to identity retarders") {
    const RunConfig cfg =
        parse_config(R"({"emulator": {"sections": [{"dgd": "10 ps"}]}})");
    REQUIRE(cfg.emulator->scramblers.size() == 2);
    const auto& r = std::get<Retarder>(cfg.emulator->scramblers[0]);
    CHECK(r.retardation == 0.0);
}

TEST_CASE("carrier default and override") {
    const RunConfig with_default =
        parse_config(R"({"emulator": {"sections": [{"dgd": "1 ps"}]}})");
    CHECK(with_default.emulator->carrier_hz == doctest::Approx(193.4e12));

    const RunConfig overridden = parse_config(
        R"({"emulator": {"sections": [{"dgd": "1 ps"}], "carrier": "192 THz"}})");
    CHECK(overridden.emulator->carrier_hz == doctest::Approx(192.0e12));
    // The grid default follows the carrier.
    CHECK(overridden.grid.center_hz == doctest::Approx(192.0e12));
}

TEST_CASE("validation failures carry the offending path") {
    const auto expect_validation = [](const char* text, const char* needle) {
        try {
            parse_config(text);
            FAIL_CHECK("expected a validation error for: " << text);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::validation_error);
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };

    expect_validation(R"({"emulator": {"sections": [{"dgd": "-2 ps"}]}})", "dgd");
    expect_validation(R"({"emulator": {"sections": [{"dgd": 26}]}})", "unit");
    expect_validation(R"({"emulator": {"sections": [{"dgd": "26 parsec"}]}})", "parsec");
    expect_validation(R"({"emulator": {"sections": [{"dgd": "26 ps", "axis": [1, 1, 0]}]}})",
                      "unit length");
    expect_validation(R"({"emulator": {"sections": [{"dgd": "26 ps"}], "carier": "193 THz"}})",
                      "carier");
    expect_validation(R"({"grid": {"points": 1}})", "points");
    expect_validation(R"({"lightning": {"duration": "0 s"}})", "duration");
    expect_validation(R"({"probe": {"count": 8}})", "64");
}

TEST_CASE("malformed JSON reports line and column") {
    try {
        parse_config("{\n  \"seed\": 1,\n  oops\n}");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() >= 2);
    }
}

TEST_CASE("quantity parsing and units") {
    CHECK(parse_time_s("26 ps") == doctest::Approx(26e-12));
    CHECK(parse_time_s("1 us") == doctest::Approx(1e-6));
    CHECK(parse_frequency_hz("1.5 THz") == doctest::Approx(1.5e12));
    CHECK(parse_frequency_hz("250 MHz") == doctest::Approx(250e6));
    CHECK(parse_rate_radps("50 krad/s") == doctest::Approx(50e3));
    CHECK(parse_rate_radps("20 Mrad/s") == doctest::Approx(20e6));
    CHECK(parse_angle_rad("1.25 rad") == doctest::Approx(1.25));

    CHECK_THROWS_AS(parse_time_s("26"), Error);
    CHECK_THROWS_AS(parse_time_s("fast ps"), Error);
    CHECK_THROWS_AS(parse_rate_radps("5 Hz"), Error);
}

TEST_CASE("serialize round-trips exactly") {
    const char* texts[] = {
        R"({"emulator": {"preset": "zr"}})",
        R"({"emulator": {"preset": "highend-20"}, "seed": 123456789012345})",
        R"({
          "emulator": {
            "sections": [{"dgd": "12.7 ps", "axis": [0, 0.6, 0.8]}, {"dgd": "12.7 ps"}],
            "scramblers": [
              {"type": "static", "axis": [0, 0, 1], "retardation": "0.7853981633974483 rad"},
              {"type": "default", "hwp_rate": "1.25 Mrad/s"},
              {"type": "stack", "plates": [
                 {"kind": "qwp", "orientation": "0.1 rad", "rate": "333 rad/s"},
                 {"kind": "hwp", "rate": "2 Mrad/s",
                  "burst": {"peak": "5.1 Mrad/s", "duration": "7 us", "start": "2 us",
                            "envelope": "raised-cosine", "axis": [0, 0, 1]}}
              ]}
            ],
            "carrier": "193.1 THz"
          },
          "grid": {"span": "250 GHz", "points": 101},
          "time": {"start": "1 ms", "step": "2 us", "count": 5},
          "seed": 42,
          "stats": {"samples": 5000, "bins": 32, "compare_n_sections": 16},
          "taylor": {"orders": [0, 2], "half_band": "100 GHz", "points": 1001},
          "lightning": {"peak": "5.1 Mrad/s", "duration": "10 us", "envelope": "triangular"},
          "sweep": {"section_dgd": "26 ps", "points": 91},
          "probe": {"count": 512, "dt": "2 ns"}
        })",
    };
    for (const char* text : texts) {
        const RunConfig first = parse_config(text);
        const std::string canonical = serialize(first);
        const RunConfig second = parse_config(canonical);
        CHECK(first == second);
        CHECK(serialize(second) == canonical);
        CHECK(config_hash(first) == config_hash(second));
    }
}

TEST_CASE("config hash distinguishes configurations") {
    const RunConfig a = parse_config(R"({"emulator": {"preset": "zr"}})");
    const RunConfig b = parse_config(R"({"emulator": {"preset": "zr"}, "seed": 1})");
    CHECK(config_hash(a) != config_hash(b));
    CHECK(config_hash(a) == config_hash(parse_config(serialize(a))));
}

TEST_CASE("mixing preset with explicit fields is rejected") {
    try {
        parse_config(R"({"emulator": {"preset": "zr", "sections": []}})");
        FAIL("expected a validation error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::validation_error);
    }
}

TEST_CASE("burst peaks beyond the supported ceiling are rejected at parse") {
    CHECK_THROWS_AS(parse_config(R"({
        "emulator": {
          "sections": [{"dgd": "1 ps"}],
          "scramblers": [
            {"type": "stack", "plates": [
              {"kind": "hwp", "burst": {"peak": "80 Mrad/s", "duration": "1 us"}}]},
            {"type": "static"}
          ]
        }
      })"),
                    Error);
}
