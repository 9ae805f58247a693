// Copyright 2026 The rlpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "rlpt/light.h"

#include <stdexcept>

namespace rlpt {

LightPoint light_sample(const AreaLight& light, const Primitive& primitive, double u,
                        double v) {
    LightPoint lp;
    lp.point = primitive.sample_point(u, v, &lp.normal);
    lp.pdf_area = 1.0 / light.area;
    return lp;
}

EnvironmentLight EnvironmentLight::constant(const Spectrum& radiance) {
    EnvironmentLight e;
    e.constant_ = radiance;
    return e;
}

EnvironmentLight EnvironmentLight::lattice(int width, int height,
                                           std::vector<Spectrum> texels) {
    if (width <= 0 || height <= 0 ||
        texels.size() != static_cast<size_t>(width) * static_cast<size_t>(height))
        throw std::invalid_argument("EnvironmentLight: lattice size mismatch");
    for (const Spectrum& t : texels)
        if (!t.is_finite() || t.r < 0 || t.g < 0 || t.b < 0)
            throw std::invalid_argument("EnvironmentLight: texel must be finite and >= 0");
    EnvironmentLight e;
    e.width_ = width;
    e.height_ = height;
    e.texels_ = std::move(texels);
    return e;
}

Spectrum EnvironmentLight::radiance(const Vec3& dir) const {
    if (is_constant()) return constant_;
    double u, v;
    env_uv_from_dir(dir, &u, &v);
    int i = std::min(static_cast<int>(u * width_), width_ - 1);
    int j = std::min(static_cast<int>(v * height_), height_ - 1);
    return texels_[j * width_ + i];
}

double EnvironmentLight::mean_luminance(double u0, double u1, double v0, double v1) const {
    if (is_constant()) return luminance(constant_);
    // Exact box integral against the texel grid.
    double area = (u1 - u0) * (v1 - v0);
    if (area <= 0) return 0;
    double sum = 0;
    int i0 = std::max(0, static_cast<int>(std::floor(u0 * width_)));
    int i1 = std::min(width_ - 1, static_cast<int>(std::ceil(u1 * width_)) - 1);
    int j0 = std::max(0, static_cast<int>(std::floor(v0 * height_)));
    int j1 = std::min(height_ - 1, static_cast<int>(std::ceil(v1 * height_)) - 1);
    for (int j = j0; j <= j1; ++j) {
        double tv0 = static_cast<double>(j) / height_;
        double tv1 = static_cast<double>(j + 1) / height_;
        double ov = std::max(0.0, std::min(v1, tv1) - std::max(v0, tv0));
        if (ov <= 0) continue;
        for (int i = i0; i <= i1; ++i) {
            double tu0 = static_cast<double>(i) / width_;
            double tu1 = static_cast<double>(i + 1) / width_;
            double ou = std::max(0.0, std::min(u1, tu1) - std::max(u0, tu0));
            if (ou <= 0) continue;
            sum += ou * ov * luminance(texels_[j * width_ + i]);
        }
    }
    return sum / area;
}

}  // namespace rlpt
