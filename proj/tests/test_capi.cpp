// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the pmde authors

// Exercises the shared-library C surface the way an external client would:
// opaque handles, status codes, buffers.

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "pmde.h"

namespace {

struct Handle {
    pmde_emulator* ptr = nullptr;
    ~Handle() { pmde_emulator_destroy(ptr); }
};

}  // namespace

TEST_CASE("version and status names") {
    CHECK(std::strlen(pmde_version()) > 0);
    CHECK(std::string(pmde_status_name(PMDE_OK)) == "PMDE_OK");
    CHECK(std::string(pmde_status_name(PMDE_ERROR_NEUTRAL_UNAVAILABLE)) ==
          "PMDE_ERROR_NEUTRAL_UNAVAILABLE");
}

TEST_CASE("preset emulator lifecycle through the C surface") {
    Handle h;
    REQUIRE(pmde_emulator_create_preset("highend-100", &h.ptr) == PMDE_OK);
    REQUIRE(h.ptr != nullptr);

    int sections = 0;
    CHECK(pmde_emulator_section_count(h.ptr, &sections) == PMDE_OK);
    CHECK(sections == 2);

    double carrier = 0.0;
    CHECK(pmde_emulator_carrier_hz(h.ptr, &carrier) == PMDE_OK);
    CHECK(carrier == doctest::Approx(193.4e12));

    double dgd = -1.0;
    CHECK(pmde_emulator_total_dgd(h.ptr, 0.0, &dgd) == PMDE_OK);
    CHECK(dgd >= 0.0);
    CHECK(dgd <= 100.0 + 1e-9);

    double pmd[3] = {0, 0, 0};
    CHECK(pmde_emulator_pmd_vector(h.ptr, 0.0, pmd) == PMDE_OK);
    CHECK(std::sqrt(pmd[0] * pmd[0] + pmd[1] * pmd[1] + pmd[2] * pmd[2]) ==
          doctest::Approx(dgd).epsilon(1e-12));

    double segments[6];
    int count = 0;
    CHECK(pmde_emulator_profile(h.ptr, 0.0, segments, 2, &count) == PMDE_OK);
    CHECK(count == 2);
    // Segment sum reproduces the PMD vector.
    for (int c = 0; c < 3; ++c)
        CHECK(segments[c] + segments[3 + c] == doctest::Approx(pmd[c]).epsilon(1e-9));

    double speed = 0.0;
    CHECK(pmde_emulator_scrambler_max_speed(h.ptr, 0, 0.0, 1e-10, 512, &speed) == PMDE_OK);
    CHECK(speed == doctest::Approx(20.0e6).epsilon(0.05));
}

TEST_CASE("emulator from configuration JSON and the neutral switch") {
    const char* config = R"({
      "emulator": {"sections": [{"dgd": "26 ps"}, {"dgd": "26 ps"}]}
    })";
    Handle h;
    REQUIRE(pmde_emulator_create(config, &h.ptr) == PMDE_OK);

    double dgd = -1.0;
    CHECK(pmde_emulator_total_dgd(h.ptr, 0.0, &dgd) == PMDE_OK);
    CHECK(dgd == doctest::Approx(52.0));

    REQUIRE(pmde_emulator_set_neutral(h.ptr) == PMDE_OK);
    CHECK(pmde_emulator_total_dgd(h.ptr, 0.0, &dgd) == PMDE_OK);
    CHECK(dgd < 1e-9);

    // A bare emulator object (no "emulator" wrapper) works too.
    Handle bare;
    CHECK(pmde_emulator_create(R"({"sections": [{"dgd": "5 ps"}]})", &bare.ptr) == PMDE_OK);
}

TEST_CASE("response buffer carries unitary matrices") {
    Handle h;
    REQUIRE(pmde_emulator_create_preset("zr", &h.ptr) == PMDE_OK);
    const int points = 7;
    double buffer[8 * points];
    REQUIRE(pmde_emulator_response(h.ptr, 1.5e-3, 193.4e12, 50.0e9, points, buffer) == PMDE_OK);
    for (int k = 0; k < points; ++k) {
        const double* j = buffer + 8 * k;
        // Row norms of a unitary matrix are 1.
        const double row0 = j[0] * j[0] + j[1] * j[1] + j[2] * j[2] + j[3] * j[3];
        const double row1 = j[4] * j[4] + j[5] * j[5] + j[6] * j[6] + j[7] * j[7];
        CHECK(row0 == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(row1 == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("failures set a status and a message") {
    Handle h;
    CHECK(pmde_emulator_create_preset("highend-421", &h.ptr) == PMDE_ERROR_INVALID_CONFIG);
    CHECK(h.ptr == nullptr);
    CHECK(std::strlen(pmde_last_error()) > 0);

    CHECK(pmde_emulator_create("{not json", &h.ptr) == PMDE_ERROR_PARSE);
    CHECK(pmde_emulator_create(R"({"sections": [{"dgd": "-1 ps"}]})", &h.ptr) ==
          PMDE_ERROR_VALIDATION);

    CHECK(pmde_emulator_create(nullptr, &h.ptr) == PMDE_ERROR_INVALID_ARGUMENT);
    CHECK(pmde_emulator_create_preset("zr", nullptr) == PMDE_ERROR_INVALID_ARGUMENT);

    // Odd section counts cannot be neutral.
    REQUIRE(pmde_emulator_create(R"({"sections": [{"dgd": "5 ps"}]})", &h.ptr) == PMDE_OK);
    CHECK(pmde_emulator_set_neutral(h.ptr) == PMDE_ERROR_NEUTRAL_UNAVAILABLE);

    // Degenerate PMD: the neutral channel has no principal states, which
    // surfaces through the total-DGD = 0 read-out instead of an error here;
    // an out-of-range scrambler index is a config failure.
    double speed = 0.0;
    CHECK(pmde_emulator_scrambler_max_speed(h.ptr, 9, 0.0, 1e-9, 64, &speed) ==
          PMDE_ERROR_INVALID_CONFIG);

    // Undersized profile buffer.
    double tiny[3];
    int count = 0;
    Handle two;
    REQUIRE(pmde_emulator_create(R"({"sections": [{"dgd": "5 ps"}, {"dgd": "5 ps"}]})",
                                 &two.ptr) == PMDE_OK);
    CHECK(pmde_emulator_profile(two.ptr, 0.0, tiny, 1, &count) == PMDE_ERROR_LENGTH_MISMATCH);
    CHECK(count == 2);
}

TEST_CASE("pmde_run_command writes artifacts and honors the seed override") {
    namespace fs = std::filesystem;
    const fs::path dir_a = fs::path("capi_out") / "a";
    const fs::path dir_b = fs::path("capi_out") / "b";
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);

    const char* config = R"({
      "emulator": {"sections": [{"dgd": "13 ps"}, {"dgd": "13 ps"}]},
      "stats": {"samples": 2000, "bins": 16},
      "seed": 3
    })";
    REQUIRE(pmde_run_command("stats", config, dir_a.string().c_str(), 0, 0) == PMDE_OK);
    CHECK(fs::exists(dir_a / "dgd_hist.csv"));
    CHECK(fs::exists(dir_a / "dgd_stats.json"));

    // Overriding the seed changes the draw.
    REQUIRE(pmde_run_command("stats", config, dir_b.string().c_str(), 1, 12345) == PMDE_OK);
    std::ifstream a(dir_a / "dgd_hist.csv"), b(dir_b / "dgd_hist.csv");
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() != sb.str());

    CHECK(pmde_run_command("bogus", config, dir_a.string().c_str(), 0, 0) ==
          PMDE_ERROR_INVALID_CONFIG);
}
