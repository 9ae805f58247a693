// Copyright 2026 The rlpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "rlpt/math.h"
#include "rlpt/sampling.h"

namespace rlpt {

// Lambertian reflector with optional emission. A phong_exponent > 0 turns
// the surface into a normalized Phong lobe instead (albedo acting as the
// lobe reflectance); the two are not mixed.
struct Material {
    std::string name;
    Spectrum albedo{0.0};
    Spectrum emission{0.0};
    double phong_exponent = 0;

    bool emissive() const { return emission.max_component() > 0; }
    bool glossy() const { return phong_exponent > 0; }
};

struct BsdfSample {
    Vec3 wi;  // world space, unit
    double pdf = 0;
    Spectrum f{0.0};
};

// f_s(wi, x, wo). Zero when either direction lies below the surface;
// symmetric in wi <-> wo.
Spectrum bsdf_eval(const Material& m, const Vec3& wi, const Vec3& wo, const Frame& frame);

// Density of bsdf_sample for the pair (wo -> wi).
double bsdf_pdf(const Material& m, const Vec3& wo, const Vec3& wi, const Frame& frame);

// Importance sample the BSDF: cosine-weighted for Lambertian, lobe-weighted
// for Phong. pdf always matches the analytic density of the returned wi.
BsdfSample bsdf_sample(const Material& m, const Vec3& wo, const Frame& frame, double u,
                       double v);

// Emitted radiance toward wo from a surface with the given geometric
// normal; emission is one-sided.
Spectrum emitted(const Material& m, const Vec3& wo, const Vec3& normal);

}  // namespace rlpt
