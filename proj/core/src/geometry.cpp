// Copyright 2026 The rlpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "rlpt/geometry.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace rlpt {

void Aabb::grow(const Vec3& p) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
}

void Aabb::grow(const Aabb& b) {
    grow(b.lo);
    grow(b.hi);
}

double Aabb::surface_area() const {
    Vec3 e = extent();
    if (e.x < 0 || e.y < 0 || e.z < 0) return 0;
    return 2.0 * (e.x * e.y + e.y * e.z + e.z * e.x);
}

bool Aabb::hit(const Ray& ray, const Vec3& inv_dir, double t_max) const {
    double t0 = ray.t_min, t1 = t_max;
    for (int a = 0; a < 3; ++a) {
        double near = (lo[a] - ray.origin[a]) * inv_dir[a];
        double far = (hi[a] - ray.origin[a]) * inv_dir[a];
        if (near > far) std::swap(near, far);
        t0 = std::max(t0, near);
        t1 = std::min(t1, far);
        if (t0 > t1) return false;
    }
    return true;
}

Primitive Primitive::sphere(const Vec3& center, double r, int material_id) {
    Primitive p;
    p.kind = Kind::Sphere;
    p.p0 = center;
    p.radius = r;
    p.material_id = material_id;
    if (!(r > 0)) throw std::invalid_argument("sphere: radius must be positive");
    return p;
}

Primitive Primitive::quad(const Vec3& corner, const Vec3& edge_u, const Vec3& edge_v,
                          int material_id) {
    Primitive p;
    p.kind = Kind::Quad;
    p.p0 = corner;
    p.e1 = edge_u;
    p.e2 = edge_v;
    p.material_id = material_id;
    if (!(length(cross(edge_u, edge_v)) > 0))
        throw std::invalid_argument("quad: degenerate edges");
    return p;
}

Primitive Primitive::triangle(const Vec3& a, const Vec3& b, const Vec3& c, int material_id) {
    Primitive p;
    p.kind = Kind::Triangle;
    p.p0 = a;
    p.p1 = b;
    p.p2 = c;
    p.e1 = b - a;
    p.e2 = c - a;
    p.material_id = material_id;
    if (!(length(cross(p.e1, p.e2)) > 0))
        throw std::invalid_argument("triangle: degenerate vertices");
    return p;
}

double Primitive::area() const {
    switch (kind) {
        case Kind::Sphere: return kFourPi * radius * radius;
        case Kind::Quad: return length(cross(e1, e2));
        case Kind::Triangle: return 0.5 * length(cross(e1, e2));
    }
    return 0;
}

Aabb Primitive::bounds() const {
    Aabb b;
    switch (kind) {
        case Kind::Sphere: {
            Vec3 r(radius, radius, radius);
            b.grow(p0 - r);
            b.grow(p0 + r);
            break;
        }
        case Kind::Quad:
            b.grow(p0);
            b.grow(p0 + e1);
            b.grow(p0 + e2);
            b.grow(p0 + e1 + e2);
            break;
        case Kind::Triangle:
            b.grow(p0);
            b.grow(p1);
            b.grow(p2);
            break;
    }
    return b;
}

Vec3 Primitive::normal_at(const Vec3& p) const {
    switch (kind) {
        case Kind::Sphere: return normalize(p - p0);
        case Kind::Quad:
        case Kind::Triangle: return normalize(cross(e1, e2));
    }
    return {0, 0, 1};
}

Vec3 Primitive::sample_point(double u, double v, Vec3* normal) const {
    switch (kind) {
        case Kind::Sphere: {
            Vec3 d = {0, 0, 0};
            const double z = 1.0 - 2.0 * u;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = kTwoPi * v;
            d = {r * std::cos(phi), r * std::sin(phi), z};
            if (normal) *normal = d;
            return p0 + d * radius;
        }
        case Kind::Quad: {
            if (normal) *normal = normalize(cross(e1, e2));
            return p0 + e1 * u + e2 * v;
        }
        case Kind::Triangle: {
            double su = std::sqrt(u);
            double b1 = su * (1.0 - v);
            double b2 = su * v;
            if (normal) *normal = normalize(cross(e1, e2));
            return p0 + e1 * b1 + e2 * b2;
        }
    }
    return p0;
}

double Primitive::intersect(const Ray& ray, double t_max) const {
    switch (kind) {
        case Kind::Sphere: {
            Vec3 oc = ray.origin - p0;
            double b = dot(oc, ray.dir);
            double c = dot(oc, oc) - radius * radius;
            double disc = b * b - c;
            if (disc < 0) return kInfinity;
            double sq = std::sqrt(disc);
            double t = -b - sq;
            if (t <= ray.t_min || t >= t_max) {
                t = -b + sq;
                if (t <= ray.t_min || t >= t_max) return kInfinity;
            }
            return t;
        }
        case Kind::Quad: {
            Vec3 n = cross(e1, e2);
            double denom = dot(n, ray.dir);
            if (denom == 0) return kInfinity;
            double t = dot(n, p0 - ray.origin) / denom;
            if (t <= ray.t_min || t >= t_max) return kInfinity;
            Vec3 p = ray.at(t) - p0;
            // Project onto the (possibly non-orthogonal) edge basis.
            double d11 = dot(e1, e1), d12 = dot(e1, e2), d22 = dot(e2, e2);
            double dp1 = dot(p, e1), dp2 = dot(p, e2);
            double det = d11 * d22 - d12 * d12;
            double u = (d22 * dp1 - d12 * dp2) / det;
            double v = (d11 * dp2 - d12 * dp1) / det;
            if (u < 0 || u > 1 || v < 0 || v > 1) return kInfinity;
            return t;
        }
        case Kind::Triangle: {
            // Moeller-Trumbore.
            Vec3 pvec = cross(ray.dir, e2);
            double det = dot(e1, pvec);
            if (det == 0) return kInfinity;
            double inv_det = 1.0 / det;
            Vec3 tvec = ray.origin - p0;
            double u = dot(tvec, pvec) * inv_det;
            if (u < 0 || u > 1) return kInfinity;
            Vec3 qvec = cross(tvec, e1);
            double v = dot(ray.dir, qvec) * inv_det;
            if (v < 0 || u + v > 1) return kInfinity;
            double t = dot(e2, qvec) * inv_det;
            if (t <= ray.t_min || t >= t_max) return kInfinity;
            return t;
        }
    }
    return kInfinity;
}

namespace {

struct BuildEntry {
    int first, count, parent_slot;
};

}  // namespace

Bvh Bvh::build(std::span<const Primitive> primitives) {
    if (primitives.empty()) throw std::invalid_argument("Bvh: empty primitive list");

    const int n = static_cast<int>(primitives.size());
    std::vector<Aabb> prim_bounds(n);
    std::vector<Vec3> centroids(n);
    for (int i = 0; i < n; ++i) {
        prim_bounds[i] = primitives[i].bounds();
        centroids[i] = prim_bounds[i].center();
    }

    Bvh bvh;
    bvh.order_.resize(n);
    std::iota(bvh.order_.begin(), bvh.order_.end(), 0);
    bvh.nodes_.reserve(2 * n);

    constexpr int kMaxLeaf = 2;

    // Iterative top-down build over [first, first+count) ranges of order_.
    struct Range {
        int first, count, node;
    };
    std::vector<Range> stack;

    auto make_bounds = [&](int first, int count) {
        Aabb b;
        for (int i = 0; i < count; ++i) b.grow(prim_bounds[bvh.order_[first + i]]);
        return b;
    };

    bvh.nodes_.push_back({});
    stack.push_back({0, n, 0});

    while (!stack.empty()) {
        Range r = stack.back();
        stack.pop_back();
        Node& node = bvh.nodes_[r.node];
        node.bounds = make_bounds(r.first, r.count);

        if (r.count <= kMaxLeaf) {
            node.right_or_first = r.first;
            node.count = static_cast<uint16_t>(r.count);
            continue;
        }

        // Sweep SAH on each axis over centroid-sorted order.
        int best_axis = -1, best_split = -1;
        double best_cost = kInfinity;
        std::vector<int> best_order(bvh.order_.begin() + r.first,
                                    bvh.order_.begin() + r.first + r.count);
        std::vector<int> axis_order(r.count);
        std::vector<double> right_area(r.count);

        for (int axis = 0; axis < 3; ++axis) {
            std::copy(bvh.order_.begin() + r.first, bvh.order_.begin() + r.first + r.count,
                      axis_order.begin());
            std::sort(axis_order.begin(), axis_order.end(), [&](int a, int b) {
                double ca = centroids[a][axis], cb = centroids[b][axis];
                if (ca != cb) return ca < cb;
                return a < b;
            });
            Aabb acc;
            for (int i = r.count - 1; i > 0; --i) {
                acc.grow(prim_bounds[axis_order[i]]);
                right_area[i] = acc.surface_area();
            }
            acc = Aabb{};
            for (int i = 0; i < r.count - 1; ++i) {
                acc.grow(prim_bounds[axis_order[i]]);
                double cost = acc.surface_area() * (i + 1) +
                              right_area[i + 1] * (r.count - i - 1);
                if (cost < best_cost) {
                    best_cost = cost;
                    best_axis = axis;
                    best_split = i + 1;
                    std::copy(axis_order.begin(), axis_order.end(), best_order.begin());
                }
            }
        }

        if (best_axis < 0) {
            // Degenerate (all centroids identical): median split in input order.
            best_axis = 0;
            best_split = r.count / 2;
        } else {
            std::copy(best_order.begin(), best_order.end(), bvh.order_.begin() + r.first);
        }

        node.count = 0;
        node.axis = static_cast<uint8_t>(best_axis);
        int left_node = static_cast<int>(bvh.nodes_.size());
        bvh.nodes_.push_back({});
        bvh.nodes_.push_back({});
        bvh.nodes_[r.node].right_or_first = left_node + 1;
        // Right first so the left child is processed first (cache locality
        // only; traversal order is distance based).
        stack.push_back({r.first + best_split, r.count - best_split, left_node + 1});
        stack.push_back({r.first, best_split, left_node});
    }

    return bvh;
}

Hit Bvh::intersect(std::span<const Primitive> primitives, const Ray& ray) const {
    Vec3 inv_dir(1.0 / ray.dir.x, 1.0 / ray.dir.y, 1.0 / ray.dir.z);
    double best_t = ray.t_max;
    int best_prim = -1;

    int stack[64];
    int sp = 0;
    stack[sp++] = 0;
    while (sp > 0) {
        const Node& node = nodes_[stack[--sp]];
        if (!node.bounds.hit(ray, inv_dir, best_t)) continue;
        if (node.count > 0) {
            for (int i = 0; i < node.count; ++i) {
                int prim = order_[node.right_or_first + i];
                double t = primitives[prim].intersect(ray, best_t);
                if (t < best_t) {
                    best_t = t;
                    best_prim = prim;
                }
            }
        } else {
            // Near child first: pick order by ray direction along split axis.
            int left = node.right_or_first - 1;
            int right = node.right_or_first;
            if (ray.dir[node.axis] < 0) std::swap(left, right);
            stack[sp++] = right;
            stack[sp++] = left;
        }
    }

    Hit hit;
    if (best_prim < 0) return hit;
    hit.kind = Hit::Kind::Surface;
    hit.t = best_t;
    hit.point = ray.at(best_t);
    hit.primitive_id = best_prim;
    hit.normal = primitives[best_prim].normal_at(hit.point);
    return hit;
}

bool Bvh::any_hit(std::span<const Primitive> primitives, const Ray& ray) const {
    Vec3 inv_dir(1.0 / ray.dir.x, 1.0 / ray.dir.y, 1.0 / ray.dir.z);
    int stack[64];
    int sp = 0;
    stack[sp++] = 0;
    while (sp > 0) {
        const Node& node = nodes_[stack[--sp]];
        if (!node.bounds.hit(ray, inv_dir, ray.t_max)) continue;
        if (node.count > 0) {
            for (int i = 0; i < node.count; ++i) {
                int prim = order_[node.right_or_first + i];
                if (primitives[prim].intersect(ray, ray.t_max) < kInfinity) return true;
            }
        } else {
            stack[sp++] = node.right_or_first;
            stack[sp++] = node.right_or_first - 1;
        }
    }
    return false;
}

}  // namespace rlpt
