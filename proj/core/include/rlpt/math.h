// Copyright 2026 The rlpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <algorithm>
#include <cstdint>
#include <limits>

namespace rlpt {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kFourPi = 4.0 * kPi;
constexpr double kInvPi = 1.0 / kPi;
constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Vec3 {
    double x = 0, y = 0, z = 0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
    bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }

    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double length_squared(const Vec3& v) { return dot(v, v); }
inline double length(const Vec3& v) { return std::sqrt(dot(v, v)); }

inline Vec3 normalize(const Vec3& v) {
    double len = length(v);
    return v / len;
}

inline bool is_finite(const Vec3& v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

// Flips n so that it lies in the hemisphere of d.
inline Vec3 faceforward(const Vec3& n, const Vec3& d) {
    return dot(n, d) < 0.0 ? -n : n;
}

struct Spectrum {
    double r = 0, g = 0, b = 0;

    Spectrum() = default;
    Spectrum(double r_, double g_, double b_) : r(r_), g(g_), b(b_) {}
    explicit Spectrum(double v) : r(v), g(v), b(v) {}

    Spectrum operator+(const Spectrum& o) const { return {r + o.r, g + o.g, b + o.b}; }
    Spectrum operator-(const Spectrum& o) const { return {r - o.r, g - o.g, b - o.b}; }
    Spectrum operator*(const Spectrum& o) const { return {r * o.r, g * o.g, b * o.b}; }
    Spectrum operator*(double s) const { return {r * s, g * s, b * s}; }
    Spectrum operator/(double s) const { return {r / s, g / s, b / s}; }
    Spectrum& operator+=(const Spectrum& o) { r += o.r; g += o.g; b += o.b; return *this; }
    Spectrum& operator*=(const Spectrum& o) { r *= o.r; g *= o.g; b *= o.b; return *this; }
    Spectrum& operator*=(double s) { r *= s; g *= s; b *= s; return *this; }
    Spectrum& operator/=(double s) { r /= s; g /= s; b /= s; return *this; }
    bool operator==(const Spectrum& o) const { return r == o.r && g == o.g && b == o.b; }

    double max_component() const { return std::max(r, std::max(g, b)); }
    bool is_black() const { return r == 0 && g == 0 && b == 0; }
    bool is_finite() const { return std::isfinite(r) && std::isfinite(g) && std::isfinite(b); }
};

inline Spectrum operator*(double s, const Spectrum& c) { return c * s; }

// Rec.709 luminance weights.
inline double luminance(const Spectrum& c) {
    return 0.2126 * c.r + 0.7152 * c.g + 0.0722 * c.b;
}

// Orthonormal basis around a unit normal. The tangent construction is a
// pure function of the normal, so nearby shading points with equal normals
// share identical azimuth conventions (required for consistent hemisphere
// stratum indices across lookups).
struct Frame {
    Vec3 normal, tangent, bitangent;

    static Frame from_normal(const Vec3& n) {
        // Branchless ONB (Duff et al. 2017).
        Frame f;
        f.normal = n;
        const double sign = std::copysign(1.0, n.z);
        const double a = -1.0 / (sign + n.z);
        const double b = n.x * n.y * a;
        f.tangent = Vec3(1.0 + sign * n.x * n.x * a, sign * b, -sign * n.x);
        f.bitangent = Vec3(b, sign + n.y * n.y * a, -n.y);
        return f;
    }

    // Local convention: z along the normal.
    Vec3 to_local(const Vec3& v) const {
        return {dot(v, tangent), dot(v, bitangent), dot(v, normal)};
    }
    Vec3 to_world(const Vec3& v) const {
        return tangent * v.x + bitangent * v.y + normal * v.z;
    }
};

inline double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

inline double sqr(double x) { return x * x; }

}  // namespace rlpt
