// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the pmde authors

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "pmde/pmd.hpp"

// Monte-Carlo experiments over random scrambler states and the
// model-accuracy comparison between the truncated Taylor expansion of the
// PMD vector and the exact finite-section channel.
//
// Random scrambler states are Haar-uniform SO(3) rotations, drawn per
// retarder per sample from seed-derived substreams, so a run is fully
// reproducible and independent of evaluation order.

namespace pmde {

struct DgdHistogram {
    std::vector<double> edges_ps;  // bins+1 entries spanning [0, sum of section DGDs]
    std::vector<std::uint64_t> counts;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    double mean_ps = 0.0;
    double rms_ps = 0.0;
    double max_ps = 0.0;
};

/// Raw |PMD| samples (ps) under Haar-random scrambler states.
std::vector<double> sample_dgd_values(std::span<const DgdSection> sections, double omega0,
                                      std::uint64_t n, std::uint64_t seed);

/// Histogram of sample_dgd_values over fixed edges [0, sum of DGDs].
DgdHistogram sample_dgd(std::span<const DgdSection> sections, double omega0, std::uint64_t n,
                        std::uint64_t seed, int bins = 64);

struct PairedDgdHistograms {
    DgdHistogram first;
    DgdHistogram second;
    double ks = 0.0;  // two-sample KS distance between the draws
};

/// Paired histograms for two section layouts sharing the same total DGD but
/// a different section count (few hinges versus many).
/// Throws invalid_config when totals differ or counts match.
PairedDgdHistograms hinge_vs_uniform(std::span<const DgdSection> few,
                                     std::span<const DgdSection> many, double omega0,
                                     std::uint64_t n, std::uint64_t seed, int bins = 64);

struct ModelErrorReport {
    std::vector<double> omega;              // evaluated grid frequencies, rad/s
    double omega0 = 0.0;                    // expansion point
    std::vector<int> orders;
    std::vector<std::vector<double>> error_ps;  // [order index][frequency index]
    std::vector<double> max_error_ps;           // per order
    std::vector<int> taylor_dof;                // 3 * (order + 1)
    int exact_dof = 0;                          // 3 * section count
};

/// Per-frequency error |taylor_eval - exact| of each truncated order across
/// a band of half-width `half_band` around omega0, sampled on `points`
/// frequencies (odd). The exact finite-section model is the baseline with
/// identically zero error.
ModelErrorReport taylor_accuracy(std::span<const DgdSection> sections,
                                 std::span<const Rotation> retarders, double omega0,
                                 double half_band, int points, std::span<const int> orders);

// Distribution helpers shared by experiments and exports.

/// Kolmogorov-Smirnov distance between samples and a reference CDF.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov-Smirnov distance.
double ks_distance(std::vector<double> a, std::vector<double> b);

/// CDF of a Maxwell distribution with per-axis deviation sigma
/// (rms = sigma * sqrt(3)).
double maxwell_cdf(double x, double sigma);

/// CDF of a Rayleigh distribution with scale sigma (rms = sigma * sqrt(2)).
double rayleigh_cdf(double x, double sigma);

}  // namespace pmde
