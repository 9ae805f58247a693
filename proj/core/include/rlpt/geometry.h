// Copyright 2026 The rlpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "rlpt/math.h"

namespace rlpt {

struct Ray {
    Vec3 origin;
    Vec3 dir;  // unit
    double t_min = 0;
    double t_max = kInfinity;

    Vec3 at(double t) const { return origin + dir * t; }
};

// Result of tracing a ray. A miss in a scene with an environment light is
// reported as Environment; a miss without one as Escaped (zero radiance).
struct Hit {
    enum class Kind { Surface, Environment, Escaped };

    Kind kind = Kind::Escaped;
    double t = kInfinity;
    Vec3 point;
    Vec3 normal;  // geometric, as oriented by the primitive
    int primitive_id = -1;

    bool is_surface() const { return kind == Kind::Surface; }
    bool is_environment() const { return kind == Kind::Environment; }
};

struct Aabb {
    Vec3 lo{kInfinity, kInfinity, kInfinity};
    Vec3 hi{-kInfinity, -kInfinity, -kInfinity};

    void grow(const Vec3& p);
    void grow(const Aabb& b);
    Vec3 extent() const { return hi - lo; }
    Vec3 center() const { return (lo + hi) * 0.5; }
    double surface_area() const;
    double diagonal() const { return length(extent()); }
    bool hit(const Ray& ray, const Vec3& inv_dir, double t_max) const;
};

struct Primitive {
    enum class Kind { Sphere, Quad, Triangle };

    Kind kind = Kind::Sphere;
    // Sphere: p0 = center, radius. Quad: p0 = corner, e1/e2 = edges.
    // Triangle: p0, p1, p2 = vertices.
    Vec3 p0, p1, p2;
    Vec3 e1, e2;
    double radius = 0;
    int material_id = 0;

    static Primitive sphere(const Vec3& center, double radius, int material_id);
    static Primitive quad(const Vec3& corner, const Vec3& edge_u, const Vec3& edge_v,
                          int material_id);
    static Primitive triangle(const Vec3& a, const Vec3& b, const Vec3& c, int material_id);

    double area() const;
    Aabb bounds() const;
    // Geometric normal at a surface point (constant for quads/triangles).
    Vec3 normal_at(const Vec3& p) const;
    // Uniform point on the surface; also reports the normal there.
    Vec3 sample_point(double u, double v, Vec3* normal) const;
    // Nearest intersection within (ray.t_min, t_max); returns t or infinity.
    double intersect(const Ray& ray, double t_max) const;
};

// Binary BVH built with a sweep surface-area heuristic (median split as
// fallback). Traversal visits exactly the primitives a linear scan would.
class Bvh {
public:
    struct Node {
        Aabb bounds;
        // Interior: right child index in nodes_, left child is self+1.
        // Leaf: first primitive and count in the reordered index list.
        int right_or_first = 0;
        uint16_t count = 0;  // 0 for interior nodes
        uint8_t axis = 0;
    };

    static Bvh build(std::span<const Primitive> primitives);

    // Nearest hit with t in (ray.t_min, ray.t_max); primitive_id refers to
    // the original primitive order. kind is Escaped on a miss.
    Hit intersect(std::span<const Primitive> primitives, const Ray& ray) const;

    // True if anything intersects the ray segment.
    bool any_hit(std::span<const Primitive> primitives, const Ray& ray) const;

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<int>& primitive_order() const { return order_; }

private:
    std::vector<Node> nodes_;
    std::vector<int> order_;
};

}  // namespace rlpt
