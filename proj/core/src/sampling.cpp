// Copyright 2026 The rlpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "rlpt/sampling.h"

#include <stdexcept>

namespace rlpt {

double radical_inverse_base2(uint32_t i) {
    i = (i << 16) | (i >> 16);
    i = ((i & 0x00ff00ffu) << 8) | ((i & 0xff00ff00u) >> 8);
    i = ((i & 0x0f0f0f0fu) << 4) | ((i & 0xf0f0f0f0u) >> 4);
    i = ((i & 0x33333333u) << 2) | ((i & 0xccccccccu) >> 2);
    i = ((i & 0x55555555u) << 1) | ((i & 0xaaaaaaaau) >> 1);
    return i * 0x1p-32;
}

double radical_inverse(uint32_t base, uint32_t i) {
    if (base == 2) return radical_inverse_base2(i);
    const double inv_base = 1.0 / base;
    double inv = inv_base;
    double result = 0;
    while (i > 0) {
        result += (i % base) * inv;
        i /= base;
        inv *= inv_base;
    }
    return result;
}

std::pair<double, double> hammersley(uint32_t i, uint32_t n) {
    if (i >= n) throw std::out_of_range("hammersley: index i must be < n");
    return {static_cast<double>(i) / n, radical_inverse_base2(i)};
}

DirectionSample cosine_sample_hemisphere(double u, double v) {
    const double cos_theta = std::sqrt(1.0 - u);
    const double sin_theta = std::sqrt(u);
    const double phi = kTwoPi * v;
    Vec3 dir(sin_theta * std::cos(phi), sin_theta * std::sin(phi), cos_theta);
    return {dir, cos_theta * kInvPi};
}

Vec3 uniform_sphere_dir(double u, double v) {
    const double z = 1.0 - 2.0 * u;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = kTwoPi * v;
    return {r * std::cos(phi), r * std::sin(phi), z};
}

Vec3 uniform_hemisphere_dir(double u, double v) {
    const double z = u;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = kTwoPi * v;
    return {r * std::cos(phi), r * std::sin(phi), z};
}

}  // namespace rlpt
