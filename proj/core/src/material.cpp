// Copyright 2026 The rlpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "rlpt/material.h"

namespace rlpt {

namespace {

Vec3 reflect_about(const Vec3& v, const Vec3& n) {
    return n * (2.0 * dot(v, n)) - v;
}

}  // namespace

Spectrum bsdf_eval(const Material& m, const Vec3& wi, const Vec3& wo, const Frame& frame) {
    double cos_i = dot(wi, frame.normal);
    double cos_o = dot(wo, frame.normal);
    if (cos_i <= 0 || cos_o <= 0) return Spectrum(0.0);
    if (!m.glossy()) return m.albedo * kInvPi;

    double e = m.phong_exponent;
    double cos_r = dot(wi, reflect_about(wo, frame.normal));
    if (cos_r <= 0) return Spectrum(0.0);
    return m.albedo * ((e + 2.0) / kTwoPi * std::pow(cos_r, e));
}

double bsdf_pdf(const Material& m, const Vec3& wo, const Vec3& wi, const Frame& frame) {
    double cos_i = dot(wi, frame.normal);
    if (cos_i <= 0) return 0;
    if (!m.glossy()) return cosine_hemisphere_pdf(cos_i);

    double e = m.phong_exponent;
    double cos_r = dot(wi, reflect_about(wo, frame.normal));
    if (cos_r <= 0) return 0;
    return (e + 1.0) / kTwoPi * std::pow(cos_r, e);
}

BsdfSample bsdf_sample(const Material& m, const Vec3& wo, const Frame& frame, double u,
                       double v) {
    BsdfSample s;
    if (!m.glossy()) {
        DirectionSample d = cosine_sample_hemisphere(u, v);
        s.wi = frame.to_world(d.dir);
        s.pdf = d.pdf;
        s.f = bsdf_eval(m, s.wi, wo, frame);
        return s;
    }

    // Sample around the mirror direction; below-horizon samples keep their
    // pdf but evaluate to zero.
    double e = m.phong_exponent;
    double cos_r = std::pow(u, 1.0 / (e + 1.0));
    double sin_r = std::sqrt(std::max(0.0, 1.0 - cos_r * cos_r));
    double phi = kTwoPi * v;
    Frame lobe = Frame::from_normal(reflect_about(wo, frame.normal));
    s.wi = lobe.to_world(Vec3(sin_r * std::cos(phi), sin_r * std::sin(phi), cos_r));
    s.pdf = (e + 1.0) / kTwoPi * std::pow(cos_r, e);
    s.f = bsdf_eval(m, s.wi, wo, frame);
    return s;
}

Spectrum emitted(const Material& m, const Vec3& wo, const Vec3& normal) {
    return dot(wo, normal) > 0 ? m.emission : Spectrum(0.0);
}

}  // namespace rlpt
