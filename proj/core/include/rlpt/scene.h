// Copyright 2026 The rlpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "rlpt/geometry.h"
#include "rlpt/light.h"
#include "rlpt/material.h"

namespace rlpt {

struct Camera {
    Vec3 position{0, 0, 0};
    Vec3 look_at{0, 0, -1};
    Vec3 up{0, 1, 0};
    double vfov_degrees = 45;

    // Pinhole ray through pixel (px, py) with sub-pixel jitter in [0,1)^2.
    // Pixel (0,0) is the top-left corner.
    Ray generate_ray(int px, int py, int width, int height, double jx, double jy) const;
};

// Immutable after build(): primitives, materials, derived area lights,
// optional environment, BVH, bounds and the self-intersection epsilon
// (1e-4 x scene diagonal).
class Scene {
public:
    std::vector<Material> materials;
    std::vector<Primitive> primitives;
    std::optional<EnvironmentLight> environment;
    Camera camera;

    // Derives lights from emissive materials, builds the BVH, bounds and
    // epsilon. Must be called once after the fields above are filled.
    void build();

    Hit intersect(const Ray& ray) const;

    // True if any primitive blocks the open segment (a, b); endpoint
    // epsilons are applied on both sides.
    bool occluded(const Vec3& a, const Vec3& b) const;

    // True if any primitive blocks the ray from `origin` toward `dir`
    // (environment visibility test).
    bool occluded_toward(const Vec3& origin, const Vec3& dir) const;

    const std::vector<AreaLight>& lights() const { return lights_; }
    const Bvh& bvh() const { return bvh_; }
    const Aabb& bounds() const { return bounds_; }
    double epsilon() const { return epsilon_; }
    double total_area() const { return total_area_; }
    const Material& material_of(const Hit& hit) const {
        return materials[primitives[hit.primitive_id].material_id];
    }
    // Index into lights() for an emissive primitive, -1 otherwise.
    int light_of_primitive(int primitive_id) const {
        return primitive_to_light_[primitive_id];
    }

    // Offset a ray origin along the given normal to avoid re-hitting the
    // surface it starts from.
    Vec3 offset_point(const Vec3& p, const Vec3& n) const { return p + n * epsilon_; }

private:
    std::vector<AreaLight> lights_;
    std::vector<int> primitive_to_light_;
    Bvh bvh_;
    Aabb bounds_;
    double epsilon_ = 1e-6;
    double total_area_ = 0;
};

}  // namespace rlpt
