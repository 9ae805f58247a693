// Copyright 2026 The rlpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "rlpt/geometry.h"
#include "rlpt/math.h"

namespace rlpt {

// Derived from any primitive whose material has nonzero emission. Emits
// one-sided along the primitive's geometric normal.
struct AreaLight {
    int primitive_id = -1;
    Spectrum emission{0.0};
    double area = 0;
};

struct LightPoint {
    Vec3 point;
    Vec3 normal;
    double pdf_area = 0;  // 1 / area
};

// Uniform point on the light's primitive.
LightPoint light_sample(const AreaLight& light, const Primitive& primitive, double u, double v);

// Environment light over the full sphere: either a constant or a lattice of
// texels uniform in (phi, cos theta) so every texel subtends the same solid
// angle (4 pi / (W*H)). The polar axis is world +y.
class EnvironmentLight {
public:
    static EnvironmentLight constant(const Spectrum& radiance);
    static EnvironmentLight lattice(int width, int height, std::vector<Spectrum> texels);

    Spectrum radiance(const Vec3& dir) const;

    bool is_constant() const { return width_ == 0; }
    int width() const { return width_; }
    int height() const { return height_; }
    const std::vector<Spectrum>& texels() const { return texels_; }
    const Spectrum& constant_value() const { return constant_; }

    // Mean luminance over an axis-aligned box in the (u, v) = (phi / 2pi,
    // (cos theta + 1)/2) parameterization; exact for lattice alignment.
    double mean_luminance(double u0, double u1, double v0, double v1) const;

private:
    Spectrum constant_{0.0};
    int width_ = 0, height_ = 0;
    std::vector<Spectrum> texels_;
};

// Direction <-> (u, v) chart used by the lattice and by environment tiles.
inline Vec3 env_dir_from_uv(double u, double v) {
    double cos_theta = 2.0 * v - 1.0;
    double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
    double phi = kTwoPi * u;
    return {sin_theta * std::cos(phi), cos_theta, sin_theta * std::sin(phi)};
}

inline void env_uv_from_dir(const Vec3& dir, double* u, double* v) {
    double phi = std::atan2(dir.z, dir.x);
    if (phi < 0) phi += kTwoPi;
    *u = phi / kTwoPi;
    *v = clamp01((dir.y + 1.0) * 0.5);
}

}  // namespace rlpt
