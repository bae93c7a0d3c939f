// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the pmde authors

#include "pmde/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rng.hpp"

namespace pmde {

namespace {

DgdHistogram histogram_of(const std::vector<double>& values, double top, std::uint64_t seed,
                          int bins) {
    DgdHistogram hist;
    hist.samples = values.size();
    hist.seed = seed;
    const double edge_top = top > 0.0 ? top : 1.0;
    hist.edges_ps.resize(static_cast<std::size_t>(bins) + 1);
    for (int b = 0; b <= bins; ++b)
        hist.edges_ps[static_cast<std::size_t>(b)] = edge_top * b / bins;
    hist.counts.assign(static_cast<std::size_t>(bins), 0);
    double sum = 0.0, sum2 = 0.0;
    for (double v : values) {
        auto idx = static_cast<std::size_t>(v / edge_top * bins);
        if (idx >= static_cast<std::size_t>(bins)) idx = static_cast<std::size_t>(bins) - 1;
        ++hist.counts[idx];
        sum += v;
        sum2 += v * v;
        hist.max_ps = std::max(hist.max_ps, v);
    }
    if (!values.empty()) {
        hist.mean_ps = sum / static_cast<double>(values.size());
        hist.rms_ps = std::sqrt(sum2 / static_cast<double>(values.size()));
    }
    return hist;
}

}  // namespace

std::vector<double> sample_dgd_values(std::span<const DgdSection> sections, double omega0,
                                      std::uint64_t n, std::uint64_t seed) {
    if (n < 1) fail(ErrorCode::invalid_config, "sample_dgd needs n >= 1");
    if (sections.empty()) fail(ErrorCode::invalid_config, "sample_dgd needs at least one section");
    const double total = [&] {
        double t = 0.0;
        for (const auto& s : sections) t += s.dgd_ps;
        return t;
    }();

    std::vector<double> values;
    values.reserve(n);
    std::vector<Rotation> scramblers(sections.size() + 1);
    for (std::uint64_t i = 0; i < n; ++i) {
        auto rng = detail::Stream::for_draw(seed, i);
        for (auto& r : scramblers) r = detail::haar_rotation(rng);
        const double dgd = norm(total_pmd_analytic(sections, scramblers, omega0));
        if (dgd > total + 1e-6)
            fail(ErrorCode::internal_error, "sampled DGD exceeds the section total");
        values.push_back(dgd);
    }
    return values;
}

DgdHistogram sample_dgd(std::span<const DgdSection> sections, double omega0, std::uint64_t n,
                        std::uint64_t seed, int bins) {
    if (bins < 1) fail(ErrorCode::invalid_config, "sample_dgd needs bins >= 1");
    double total = 0.0;
    for (const auto& s : sections) total += s.dgd_ps;
    return histogram_of(sample_dgd_values(sections, omega0, n, seed), total, seed, bins);
}

PairedDgdHistograms hinge_vs_uniform(std::span<const DgdSection> few,
                                     std::span<const DgdSection> many, double omega0,
                                     std::uint64_t n, std::uint64_t seed, int bins) {
    double total_few = 0.0, total_many = 0.0;
    for (const auto& s : few) total_few += s.dgd_ps;
    for (const auto& s : many) total_many += s.dgd_ps;
    if (std::abs(total_few - total_many) > 1e-9)
        fail(ErrorCode::invalid_config, "hinge_vs_uniform needs configurations with equal total DGD");
    if (few.size() == many.size())
        fail(ErrorCode::invalid_config, "hinge_vs_uniform needs differing section counts");

    PairedDgdHistograms out;
    auto values_few = sample_dgd_values(few, omega0, n, seed);
    auto values_many = sample_dgd_values(many, omega0, n, detail::mix64(seed ^ 0x5bd1e995u));
    out.first = histogram_of(values_few, total_few, seed, bins);
    out.second = histogram_of(values_many, total_many, seed, bins);
    out.ks = ks_distance(std::move(values_few), std::move(values_many));
    return out;
}

ModelErrorReport taylor_accuracy(std::span<const DgdSection> sections,
                                 std::span<const Rotation> retarders, double omega0,
                                 double half_band, int points, std::span<const int> orders) {
    if (points < 11 || points % 2 == 0)
        fail(ErrorCode::grid_too_coarse, "taylor_accuracy needs an odd grid of at least 11 points");
    if (!(half_band > 0.0)) fail(ErrorCode::invalid_config, "taylor_accuracy needs a positive band");

    const FrequencyGrid grid{omega0, 2.0 * half_band, points};
    // Frozen scrambler states arrive as rotations; lift them to Jones.
    const auto responses = [&] {
        std::vector<JonesMatrix> frozen;
        frozen.reserve(retarders.size());
        for (const auto& r : retarders) {
            const AxisAngle aa = axis_angle_of(r);
            frozen.push_back(jones_of(Retarder{aa.axis, aa.angle}));
        }
        return cascade_response(sections, frozen, grid);
    }();

    // Exact input-referred trajectory across the band; margin of 2 keeps the
    // refined extraction stencil inside the grid.
    const int lo = 2, hi = points - 3;
    std::vector<PmdVector> exact(static_cast<std::size_t>(hi - lo + 1));
    for (int k = lo; k <= hi; ++k)
        exact[static_cast<std::size_t>(k - lo)] = extract_pmd_fd(responses, grid, k);

    ModelErrorReport report;
    report.omega0 = grid.omega(grid.center_index());
    report.exact_dof = 3 * static_cast<int>(sections.size());
    for (int k = lo; k <= hi; ++k) report.omega.push_back(grid.omega(k));

    for (int order : orders) {
        const TaylorCoefficients coeffs = taylor_fit(responses, grid, order);
        std::vector<double> err;
        err.reserve(report.omega.size());
        double worst = 0.0;
        for (int k = lo; k <= hi; ++k) {
            const PmdVector predicted = taylor_eval(coeffs, grid.omega(k));
            const double e = norm(predicted - exact[static_cast<std::size_t>(k - lo)]);
            err.push_back(e);
            worst = std::max(worst, e);
        }
        report.orders.push_back(order);
        report.taylor_dof.push_back(3 * (order + 1));
        report.error_ps.push_back(std::move(err));
        report.max_error_ps.push_back(worst);
    }
    return report;
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) fail(ErrorCode::invalid_config, "ks_distance needs samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
    }
    return d;
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) fail(ErrorCode::invalid_config, "ks_distance needs samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        // Consume every sample tied at the current jump point on both sides
        // before comparing the CDFs.
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double maxwell_cdf(double x, double sigma) {
    if (x <= 0.0) return 0.0;
    const double u = x / sigma;
    return std::erf(u / std::numbers::sqrt2) -
           std::sqrt(2.0 / std::numbers::pi) * u * std::exp(-u * u / 2.0);
}

double rayleigh_cdf(double x, double sigma) {
    if (x <= 0.0) return 0.0;
    const double u = x / sigma;
    return 1.0 - std::exp(-u * u / 2.0);
}

}  // namespace pmde
