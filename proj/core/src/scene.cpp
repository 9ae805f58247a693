// Copyright 2026 The rlpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "rlpt/scene.h"

#include <stdexcept>

namespace rlpt {

Ray Camera::generate_ray(int px, int py, int width, int height, double jx, double jy) const {
    Vec3 forward = normalize(look_at - position);
    Vec3 right = normalize(cross(forward, up));
    Vec3 cam_up = cross(right, forward);

    double tan_half = std::tan(vfov_degrees * kPi / 180.0 * 0.5);
    double aspect = static_cast<double>(width) / height;
    double sx = (2.0 * (px + jx) / width - 1.0) * tan_half * aspect;
    double sy = (1.0 - 2.0 * (py + jy) / height) * tan_half;

    Ray ray;
    ray.origin = position;
    ray.dir = normalize(forward + right * sx + cam_up * sy);
    ray.t_min = 0;
    ray.t_max = kInfinity;
    return ray;
}

void Scene::build() {
    if (primitives.empty() && !environment)
        throw std::invalid_argument("Scene: needs primitives or an environment");
    for (const Primitive& p : primitives)
        if (p.material_id < 0 || p.material_id >= static_cast<int>(materials.size()))
            throw std::invalid_argument("Scene: primitive references missing material");

    lights_.clear();
    primitive_to_light_.assign(primitives.size(), -1);
    total_area_ = 0;
    bounds_ = Aabb{};
    for (size_t i = 0; i < primitives.size(); ++i) {
        const Primitive& p = primitives[i];
        bounds_.grow(p.bounds());
        total_area_ += p.area();
        const Material& m = materials[p.material_id];
        if (m.emissive()) {
            primitive_to_light_[i] = static_cast<int>(lights_.size());
            lights_.push_back({static_cast<int>(i), m.emission, p.area()});
        }
    }

    if (primitives.empty()) {
        bounds_.grow(Vec3(-1, -1, -1));
        bounds_.grow(Vec3(1, 1, 1));
    }
    epsilon_ = 1e-4 * bounds_.diagonal();
    if (!primitives.empty()) bvh_ = Bvh::build(primitives);
}

Hit Scene::intersect(const Ray& ray) const {
    Hit hit;
    if (!primitives.empty()) hit = bvh_.intersect(primitives, ray);
    if (!hit.is_surface() && environment) hit.kind = Hit::Kind::Environment;
    return hit;
}

bool Scene::occluded(const Vec3& a, const Vec3& b) const {
    if (primitives.empty()) return false;
    Vec3 d = b - a;
    double dist = length(d);
    if (dist <= 2 * epsilon_) return false;
    Ray ray;
    ray.origin = a;
    ray.dir = d / dist;
    ray.t_min = epsilon_;
    ray.t_max = dist - epsilon_;
    return bvh_.any_hit(primitives, ray);
}

bool Scene::occluded_toward(const Vec3& origin, const Vec3& dir) const {
    if (primitives.empty()) return false;
    Ray ray;
    ray.origin = origin;
    ray.dir = dir;
    ray.t_min = epsilon_;
    ray.t_max = kInfinity;
    return bvh_.any_hit(primitives, ray);
}

}  // namespace rlpt
