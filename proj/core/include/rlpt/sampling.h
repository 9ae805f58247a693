// Copyright 2026 The rlpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <utility>

#include "rlpt/math.h"

namespace rlpt {

struct DirectionSample {
    Vec3 dir;    // unit
    double pdf;  // solid-angle density
};

// Radical inverse in base 2, exact for all 32-bit i.
double radical_inverse_base2(uint32_t i);

// Radical inverse in an arbitrary base (used as extra low-discrepancy
// dimensions when placing points on surfaces).
double radical_inverse(uint32_t base, uint32_t i);

// Point i of the n-point Hammersley set: (i/n, radical inverse base 2 of i).
// Throws std::out_of_range for i >= n.
std::pair<double, double> hammersley(uint32_t i, uint32_t n);

// Cosine-weighted hemisphere direction in local coordinates (z up), using
// theta = arccos(sqrt(1-u)), phi = 2 pi v. pdf = cos(theta) / pi.
DirectionSample cosine_sample_hemisphere(double u, double v);

inline double cosine_hemisphere_pdf(double cos_theta) {
    return cos_theta > 0 ? cos_theta * kInvPi : 0.0;
}

// Uniform direction on the full sphere, pdf = 1 / (4 pi).
Vec3 uniform_sphere_dir(double u, double v);

// Uniform direction on the upper local hemisphere, pdf = 1 / (2 pi).
Vec3 uniform_hemisphere_dir(double u, double v);

}  // namespace rlpt
