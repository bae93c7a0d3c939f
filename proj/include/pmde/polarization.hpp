// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the pmde authors

#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "pmde/errors.hpp"

// Jones/Stokes/Mueller calculus on the Poincare sphere.
//
// Conventions, fixed once and used by the whole library:
//   * Stokes axes: S1 = horizontal/vertical, S2 = +/-45 deg linear,
//     S3 = circular, right-handed. The Jones state (1, i)/sqrt(2) maps
//     to (0, 0, +1).
//   * Retardation delta > 0 rotates Stokes vectors counterclockwise about
//     the retarder axis as seen from the axis tip (right-hand rule).
//   * Matrices compose in propagation order: the matrix of a later element
//     multiplies from the left.
//   * The global phase of a Jones matrix is carried but never compared;
//     equality checks happen in SO(3) or modulo phase.
//   * Angles accumulate unbounded; reduction into [0, 2*pi) happens only at
//     presentation boundaries, never inside running computations.

namespace pmde {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Stokes space

struct Stokes {
    double s1 = 0.0;
    double s2 = 0.0;
    double s3 = 0.0;
};

constexpr Stokes operator+(const Stokes& a, const Stokes& b) { return {a.s1 + b.s1, a.s2 + b.s2, a.s3 + b.s3}; }
constexpr Stokes operator-(const Stokes& a, const Stokes& b) { return {a.s1 - b.s1, a.s2 - b.s2, a.s3 - b.s3}; }
constexpr Stokes operator-(const Stokes& a) { return {-a.s1, -a.s2, -a.s3}; }
constexpr Stokes operator*(double c, const Stokes& a) { return {c * a.s1, c * a.s2, c * a.s3}; }

constexpr double dot(const Stokes& a, const Stokes& b) { return a.s1 * b.s1 + a.s2 * b.s2 + a.s3 * b.s3; }

constexpr Stokes cross(const Stokes& a, const Stokes& b) {
    return {a.s2 * b.s3 - a.s3 * b.s2, a.s3 * b.s1 - a.s1 * b.s3, a.s1 * b.s2 - a.s2 * b.s1};
}

inline double norm(const Stokes& a) { return std::sqrt(dot(a, a)); }

Stokes normalized(const Stokes& a);

/// Great-circle angle between two unit Stokes vectors, radians.
double angle_between(const Stokes& a, const Stokes& b);

/// n quasi-uniform points on the unit sphere (golden-angle spiral).
std::vector<Stokes> fibonacci_sphere(int n);

// ---------------------------------------------------------------------------
// Jones space

struct Jones {
    Complex ex;
    Complex ey;
};

inline double norm(const Jones& v) { return std::sqrt(std::norm(v.ex) + std::norm(v.ey)); }

Jones normalized(const Jones& v);

/// Hermitian inner product <a, b> = conj(a) . b.
inline Complex inner(const Jones& a, const Jones& b) {
    return std::conj(a.ex) * b.ex + std::conj(a.ey) * b.ey;
}

/// 2x2 complex transfer matrix [[xx, xy], [yx, yy]] acting on (ex, ey).
struct JonesMatrix {
    Complex xx, xy, yx, yy;

    static JonesMatrix identity() { return {1.0, 0.0, 0.0, 1.0}; }
};

JonesMatrix operator*(const JonesMatrix& a, const JonesMatrix& b);
Jones operator*(const JonesMatrix& m, const Jones& v);
JonesMatrix adjoint(const JonesMatrix& m);

/// Largest entry of |J J^dagger - I|; zero for a lossless element.
double unitarity_residual(const JonesMatrix& m);

// ---------------------------------------------------------------------------
// Mueller rotations (SO(3) action on the sphere)

struct Rotation {
    double m[3][3];

    static Rotation identity() { return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}; }
};

Rotation operator*(const Rotation& a, const Rotation& b);
Stokes operator*(const Rotation& r, const Stokes& s);
Rotation transpose(const Rotation& r);
double orthogonality_residual(const Rotation& r);

struct AxisAngle {
    Stokes axis;
    double angle;
};

// ---------------------------------------------------------------------------
// Elements

/// General elliptical retarder: rotation by `retardation` about `axis`.
struct Retarder {
    Stokes axis;         // unit eigenmode on the sphere
    double retardation;  // rad
};

enum class PlateKind { qwp, hwp };

/// Physical waveplate with its slow axis at azimuth `orientation` (rad).
struct Waveplate {
    PlateKind kind;
    double orientation;
};

/// pi/2 for a QWP, pi for a HWP.
double retardation_of(PlateKind kind);

/// Stokes-space retarder equivalent to a waveplate: equatorial axis at
/// azimuth 2*orientation.
Retarder equivalent_retarder(const Waveplate& p);

// ---------------------------------------------------------------------------
// Conversions

/// Right-handed rotation by `angle` about a unit axis (Rodrigues form).
Rotation rotation_about(const Stokes& axis, double angle);

Rotation rotation_of(const Retarder& r);

/// SU(2) -> SO(3): the Stokes rotation realized by a unitary Jones matrix.
/// Throws non_unitary_input if the unitarity residual exceeds 1e-8.
Rotation rotation_of(const JonesMatrix& j);

/// SU(2) lift of a retarder: cos(d/2) I - i sin(d/2) (axis . sigma),
/// times exp(i global_phase).
JonesMatrix jones_of(const Retarder& r, double global_phase = 0.0);

JonesMatrix jones_of(const Waveplate& p);

Stokes stokes_of(const Jones& v);

/// A Jones state with the given unit Stokes vector (phase convention:
/// the larger component is real and non-negative).
Jones jones_state_of(const Stokes& s);

/// Robust axis/angle extraction, angle in [0, pi]. Handles both the
/// near-identity and the near-half-turn case.
AxisAngle axis_angle_of(const Rotation& r);

/// Minimal rotation taking unit vector `from` onto unit vector `to`.
Rotation rotation_aligning(const Stokes& from, const Stokes& to);

/// Reduce an angle into [0, 2*pi). Presentation helper only.
double reduce_angle(double angle);

}  // namespace pmde
