// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the pmde authors

#include "pmde/polarization.hpp"

#include <algorithm>
#include <numbers>

namespace pmde {

namespace {

constexpr double pi = std::numbers::pi;
constexpr Complex imag_unit{0.0, 1.0};

}  // namespace

Stokes normalized(const Stokes& a) {
    const double n = norm(a);
    if (n < 1e-300) fail(ErrorCode::internal_error, "cannot normalize a zero Stokes vector");
    return (1.0 / n) * a;
}

double angle_between(const Stokes& a, const Stokes& b) {
    // atan2 form stays accurate for nearly parallel and nearly opposite pairs.
    return std::atan2(norm(cross(a, b)), dot(a, b));
}

std::vector<Stokes> fibonacci_sphere(int n) {
    if (n < 1) fail(ErrorCode::invalid_config, "fibonacci_sphere needs n >= 1");
    std::vector<Stokes> pts;
    pts.reserve(static_cast<std::size_t>(n));
    const double golden = pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < n; ++k) {
        const double z = 1.0 - (2.0 * k + 1.0) / n;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * k;
        pts.push_back({r * std::cos(phi), r * std::sin(phi), z});
    }
    return pts;
}

Jones normalized(const Jones& v) {
    const double n = norm(v);
    if (n < 1e-300) fail(ErrorCode::internal_error, "cannot normalize a zero Jones vector");
    return {v.ex / n, v.ey / n};
}

JonesMatrix operator*(const JonesMatrix& a, const JonesMatrix& b) {
    return {a.xx * b.xx + a.xy * b.yx, a.xx * b.xy + a.xy * b.yy,
            a.yx * b.xx + a.yy * b.yx, a.yx * b.xy + a.yy * b.yy};
}

Jones operator*(const JonesMatrix& m, const Jones& v) {
    return {m.xx * v.ex + m.xy * v.ey, m.yx * v.ex + m.yy * v.ey};
}

JonesMatrix adjoint(const JonesMatrix& m) {
    return {std::conj(m.xx), std::conj(m.yx), std::conj(m.xy), std::conj(m.yy)};
}

double unitarity_residual(const JonesMatrix& m) {
    const JonesMatrix p = m * adjoint(m);
    double r = 0.0;
    r = std::max(r, std::abs(p.xx - 1.0));
    r = std::max(r, std::abs(p.yy - 1.0));
    r = std::max(r, std::abs(p.xy));
    r = std::max(r, std::abs(p.yx));
    return r;
}

Rotation operator*(const Rotation& a, const Rotation& b) {
    Rotation out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            out.m[i][j] = a.m[i][0] * b.m[0][j] + a.m[i][1] * b.m[1][j] + a.m[i][2] * b.m[2][j];
    return out;
}

Stokes operator*(const Rotation& r, const Stokes& s) {
    return {r.m[0][0] * s.s1 + r.m[0][1] * s.s2 + r.m[0][2] * s.s3,
            r.m[1][0] * s.s1 + r.m[1][1] * s.s2 + r.m[1][2] * s.s3,
            r.m[2][0] * s.s1 + r.m[2][1] * s.s2 + r.m[2][2] * s.s3};
}

Rotation transpose(const Rotation& r) {
    Rotation out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out.m[i][j] = r.m[j][i];
    return out;
}

double orthogonality_residual(const Rotation& r) {
    const Rotation p = r * transpose(r);
    double res = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) res = std::max(res, std::abs(p.m[i][j] - (i == j ? 1.0 : 0.0)));
    const double det =
        r.m[0][0] * (r.m[1][1] * r.m[2][2] - r.m[1][2] * r.m[2][1]) -
        r.m[0][1] * (r.m[1][0] * r.m[2][2] - r.m[1][2] * r.m[2][0]) +
        r.m[0][2] * (r.m[1][0] * r.m[2][1] - r.m[1][1] * r.m[2][0]);
    return std::max(res, std::abs(det - 1.0));
}

double retardation_of(PlateKind kind) { return kind == PlateKind::hwp ? pi : pi / 2.0; }

Retarder equivalent_retarder(const Waveplate& p) {
    return {{std::cos(2.0 * p.orientation), std::sin(2.0 * p.orientation), 0.0}, retardation_of(p.kind)};
}

Rotation rotation_about(const Stokes& axis, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double v = 1.0 - c;
    const double a1 = axis.s1, a2 = axis.s2, a3 = axis.s3;
    return {{{c + v * a1 * a1, v * a1 * a2 - s * a3, v * a1 * a3 + s * a2},
             {v * a1 * a2 + s * a3, c + v * a2 * a2, v * a2 * a3 - s * a1},
             {v * a1 * a3 - s * a2, v * a2 * a3 + s * a1, c + v * a3 * a3}}};
}

Rotation rotation_of(const Retarder& r) { return rotation_about(r.axis, r.retardation); }

Rotation rotation_of(const JonesMatrix& j) {
    if (unitarity_residual(j) > 1e-8)
        fail(ErrorCode::non_unitary_input, "Jones matrix is not unitary within 1e-8");

    // R_ij = Re tr(sigma_i J sigma_j J^dagger) / 2, with the Pauli set
    // matching the library Stokes convention:
    //   sigma_1 = [[1,0],[0,-1]], sigma_2 = [[0,1],[1,0]], sigma_3 = [[0,-i],[i,0]]
    const JonesMatrix jd = adjoint(j);
    const JonesMatrix s[3] = {
        {1.0, 0.0, 0.0, -1.0},
        {0.0, 1.0, 1.0, 0.0},
        {0.0, -imag_unit, imag_unit, 0.0},
    };
    Rotation out;
    for (int col = 0; col < 3; ++col) {
        const JonesMatrix a = j * (s[col] * jd);
        out.m[0][col] = 0.5 * (a.xx - a.yy).real();
        out.m[1][col] = 0.5 * (a.xy + a.yx).real();
        out.m[2][col] = 0.5 * (imag_unit * (a.xy - a.yx)).real();
    }
    return out;
}

JonesMatrix jones_of(const Retarder& r, double global_phase) {
    const double c = std::cos(r.retardation / 2.0);
    const double s = std::sin(r.retardation / 2.0);
    const double a1 = r.axis.s1, a2 = r.axis.s2, a3 = r.axis.s3;
    // axis . sigma = [[a1, a2 - i a3], [a2 + i a3, -a1]]
    JonesMatrix j{Complex{c, -s * a1}, Complex{-s * a3, -s * a2},
                  Complex{s * a3, -s * a2}, Complex{c, s * a1}};
    if (global_phase != 0.0) {
        const Complex ph = std::exp(imag_unit * global_phase);
        j.xx *= ph;
        j.xy *= ph;
        j.yx *= ph;
        j.yy *= ph;
    }
    return j;
}

JonesMatrix jones_of(const Waveplate& p) { return jones_of(equivalent_retarder(p)); }

Stokes stokes_of(const Jones& v) {
    const Complex c = v.ex * std::conj(v.ey);
    return {std::norm(v.ex) - std::norm(v.ey), 2.0 * c.real(), -2.0 * c.imag()};
}

Jones jones_state_of(const Stokes& s) {
    if (s.s1 >= 0.0) {
        const double ex = std::sqrt((1.0 + s.s1) / 2.0);
        return {Complex{ex, 0.0}, Complex{s.s2 / (2.0 * ex), s.s3 / (2.0 * ex)}};
    }
    const double ey = std::sqrt((1.0 - s.s1) / 2.0);
    return {Complex{s.s2 / (2.0 * ey), -s.s3 / (2.0 * ey)}, Complex{ey, 0.0}};
}

AxisAngle axis_angle_of(const Rotation& r) {
    const double tr = r.m[0][0] + r.m[1][1] + r.m[2][2];
    const double cos_t = std::clamp((tr - 1.0) / 2.0, -1.0, 1.0);
    const Stokes v{(r.m[2][1] - r.m[1][2]) / 2.0,
                   (r.m[0][2] - r.m[2][0]) / 2.0,
                   (r.m[1][0] - r.m[0][1]) / 2.0};
    const double sin_t = norm(v);
    const double angle = std::atan2(sin_t, cos_t);

    if (angle < 1e-12) return {{1.0, 0.0, 0.0}, angle};

    if (angle < 3.0) return {(1.0 / sin_t) * v, angle};

    // Near a half-turn the antisymmetric part vanishes; recover the axis
    // from the symmetric part (R + R^T)/2 = cos I + (1 - cos) a a^T.
    const double one_minus_c = 1.0 - cos_t;
    double d[3] = {(r.m[0][0] - cos_t) / one_minus_c,
                   (r.m[1][1] - cos_t) / one_minus_c,
                   (r.m[2][2] - cos_t) / one_minus_c};
    int k = 0;
    if (d[1] > d[k]) k = 1;
    if (d[2] > d[k]) k = 2;
    double a[3];
    a[k] = std::sqrt(std::max(0.0, d[k]));
    const double denom = one_minus_c * a[k];
    const int i = (k + 1) % 3, j = (k + 2) % 3;
    a[i] = (r.m[k][i] + r.m[i][k]) / (2.0 * denom);
    a[j] = (r.m[k][j] + r.m[j][k]) / (2.0 * denom);
    Stokes axis = normalized(Stokes{a[0], a[1], a[2]});
    if (sin_t > 1e-12 && dot(axis, v) < 0.0) axis = -axis;
    return {axis, angle};
}

Rotation rotation_aligning(const Stokes& from, const Stokes& to) {
    const Stokes v = cross(from, to);
    const double s = norm(v);
    const double c = dot(from, to);
    if (s > 1e-12) return rotation_about((1.0 / s) * v, std::atan2(s, c));
    if (c > 0.0) return Rotation::identity();
    // Antiparallel: half-turn about any perpendicular axis.
    Stokes ref{1.0, 0.0, 0.0};
    if (std::abs(from.s1) > 0.9) ref = {0.0, 1.0, 0.0};
    return rotation_about(normalized(cross(from, ref)), pi);
}

double reduce_angle(double angle) {
    const double two_pi = 2.0 * pi;
    double a = std::fmod(angle, two_pi);
    if (a < 0.0) a += two_pi;
    return a;
}

}  // namespace pmde
