// Copyright 2026 The rlpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "rlpt/guiding.h"

#include <atomic>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "rlpt/sampling.h"

namespace rlpt {

int HemisphereGrid::stratum_of(const Frame& frame, const Vec3& dir) const {
    double cos_theta = dot(dir, frame.normal);
    if (cos_theta <= 0) return -1;
    int band = std::min(static_cast<int>(cos_theta * bands), bands - 1);
    double phi = std::atan2(dot(dir, frame.bitangent), dot(dir, frame.tangent));
    if (phi < 0) phi += kTwoPi;
    int sector = std::min(static_cast<int>(phi / kTwoPi * sectors), sectors - 1);
    return sector + sectors * band;
}

DirectionSample HemisphereGrid::sample_in_stratum(const Frame& frame, int k, double u,
                                                  double v) const {
    if (k < 0 || k >= stratum_count())
        throw std::out_of_range("HemisphereGrid: stratum index out of range");
    int band = k / sectors;
    int sector = k % sectors;
    double cos_theta = (band + u) / bands;
    double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
    double phi = kTwoPi * (sector + v) / sectors;
    Vec3 local(sin_theta * std::cos(phi), sin_theta * std::sin(phi), cos_theta);
    return {frame.to_world(local), stratum_count() / kTwoPi};
}

Vec3 HemisphereGrid::stratum_center(const Frame& frame, int k) const {
    int band = k / sectors;
    int sector = k % sectors;
    double cos_theta = (band + 0.5) / bands;
    double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
    double phi = kTwoPi * (sector + 0.5) / sectors;
    return frame.to_world(Vec3(sin_theta * std::cos(phi), sin_theta * std::sin(phi), cos_theta));
}

AlphaSchedule AlphaSchedule::parse(const std::string& text) {
    if (text == "visits") return per_visit();
    if (text.rfind("const:", 0) == 0) {
        double a = std::stod(text.substr(6));
        if (!(a >= 0.0 && a <= 1.0))
            throw std::invalid_argument("alpha: constant must lie in [0,1]");
        return constant_rate(a);
    }
    throw std::invalid_argument("alpha: expected 'visits' or 'const:<value>', got '" + text +
                                "'");
}

std::string AlphaSchedule::to_string() const {
    if (kind == Kind::PerVisit) return "visits";
    return "const:" + std::to_string(constant);
}

void ProbeGrid::build(const std::vector<Vec3>& positions) {
    bounds_ = Aabb{};
    for (const Vec3& p : positions) bounds_.grow(p);
    // Pad so boundary points land strictly inside.
    Vec3 pad = bounds_.extent() * 1e-6 + Vec3(1e-12, 1e-12, 1e-12);
    bounds_.lo = bounds_.lo - pad;
    bounds_.hi = bounds_.hi + pad;

    // Aim for cells of roughly diag / (2 cbrt(n)); flat axes collapse to a
    // single cell.
    Vec3 e = bounds_.extent();
    double diag = bounds_.diagonal();
    double target = diag / (2.0 * std::cbrt(static_cast<double>(positions.size())) + 1.0);
    auto res_for = [&](double extent) {
        if (!(extent > 1e-9 * diag) || !(target > 0)) return 1;
        return std::clamp(static_cast<int>(std::ceil(extent / target)), 1, 64);
    };
    nx_ = res_for(e.x);
    ny_ = res_for(e.y);
    nz_ = res_for(e.z);
    cell_size_ = {e.x > 0 ? e.x / nx_ : 1.0, e.y > 0 ? e.y / ny_ : 1.0,
                  e.z > 0 ? e.z / nz_ : 1.0};

    cells_.assign(static_cast<size_t>(nx_) * ny_ * nz_, {});
    for (size_t i = 0; i < positions.size(); ++i) {
        Vec3 rel = positions[i] - bounds_.lo;
        int ix = std::clamp(static_cast<int>(rel.x / cell_size_.x), 0, nx_ - 1);
        int iy = std::clamp(static_cast<int>(rel.y / cell_size_.y), 0, ny_ - 1);
        int iz = std::clamp(static_cast<int>(rel.z / cell_size_.z), 0, nz_ - 1);
        cells_[cell_index(ix, iy, iz)].push_back(static_cast<int>(i));
    }
}

int ProbeGrid::nearest(const Vec3& query, const Vec3& normal, double cos_min,
                       const std::vector<Vec3>& positions,
                       const std::vector<Vec3>& normals) const {
    Vec3 rel = query - bounds_.lo;
    int qx = std::clamp(static_cast<int>(rel.x / cell_size_.x), 0, nx_ - 1);
    int qy = std::clamp(static_cast<int>(rel.y / cell_size_.y), 0, ny_ - 1);
    int qz = std::clamp(static_cast<int>(rel.z / cell_size_.z), 0, nz_ - 1);

    double best_d2 = kInfinity;
    int best = -1;
    // Lower bound on the distance to cells at Chebyshev ring r+1: rings can
    // only grow along axes with more than one cell.
    double h_min = kInfinity;
    if (nx_ > 1) h_min = std::min(h_min, cell_size_.x);
    if (ny_ > 1) h_min = std::min(h_min, cell_size_.y);
    if (nz_ > 1) h_min = std::min(h_min, cell_size_.z);
    int max_ring = std::max({nx_, ny_, nz_});

    auto scan_cell = [&](int ix, int iy, int iz) {
        for (int i : cells_[cell_index(ix, iy, iz)]) {
            if (dot(normals[i], normal) < cos_min) continue;
            double d2 = length_squared(positions[i] - query);
            if (d2 < best_d2 || (d2 == best_d2 && i < best)) {
                best_d2 = d2;
                best = i;
            }
        }
    };
    auto scan_rect = [&](int ix0, int ix1, int iy0, int iy1, int iz0, int iz1) {
        ix0 = std::max(ix0, 0);
        iy0 = std::max(iy0, 0);
        iz0 = std::max(iz0, 0);
        ix1 = std::min(ix1, nx_ - 1);
        iy1 = std::min(iy1, ny_ - 1);
        iz1 = std::min(iz1, nz_ - 1);
        for (int iz = iz0; iz <= iz1; ++iz)
            for (int iy = iy0; iy <= iy1; ++iy)
                for (int ix = ix0; ix <= ix1; ++ix) scan_cell(ix, iy, iz);
    };

    for (int ring = 0; ring <= max_ring; ++ring) {
        if (ring == 0) {
            scan_cell(qx, qy, qz);
        } else {
            // The six faces of the Chebyshev shell, without overlap.
            if (qx - ring >= 0)
                scan_rect(qx - ring, qx - ring, qy - ring, qy + ring, qz - ring, qz + ring);
            if (qx + ring < nx_)
                scan_rect(qx + ring, qx + ring, qy - ring, qy + ring, qz - ring, qz + ring);
            if (qy - ring >= 0)
                scan_rect(qx - ring + 1, qx + ring - 1, qy - ring, qy - ring, qz - ring,
                          qz + ring);
            if (qy + ring < ny_)
                scan_rect(qx - ring + 1, qx + ring - 1, qy + ring, qy + ring, qz - ring,
                          qz + ring);
            if (qz - ring >= 0)
                scan_rect(qx - ring + 1, qx + ring - 1, qy - ring + 1, qy + ring - 1,
                          qz - ring, qz - ring);
            if (qz + ring < nz_)
                scan_rect(qx - ring + 1, qx + ring - 1, qy - ring + 1, qy + ring - 1,
                          qz + ring, qz + ring);
        }
        if (best >= 0 && best_d2 <= sqr(ring * h_min)) break;
    }
    return best;
}

QField QField::place_probes(const Scene& scene, int count, const HemisphereGrid& grid,
                            const Options& options) {
    if (count < 1) throw std::invalid_argument("place_probes: count must be >= 1");
    if (!(scene.total_area() > 0)) throw std::invalid_argument("place_probes: zero-area scene");

    QField field;
    field.grid_ = grid;
    field.options_ = options;

    // Area-weighted primitive CDF.
    std::vector<double> area_cdf(scene.primitives.size());
    double acc = 0;
    for (size_t i = 0; i < scene.primitives.size(); ++i) {
        acc += scene.primitives[i].area();
        area_cdf[i] = acc;
    }

    const int n = grid.stratum_count();
    field.positions_.reserve(count);
    field.normals_.reserve(count);
    field.fs_hint_.reserve(count);
    for (int i = 0; i < count; ++i) {
        double u_prim = static_cast<double>(i) / count;
        double target = u_prim * acc;
        size_t prim = 0;
        while (prim + 1 < area_cdf.size() && area_cdf[prim] <= target) ++prim;

        double u = radical_inverse_base2(static_cast<uint32_t>(i));
        double v = radical_inverse(3, static_cast<uint32_t>(i));
        Vec3 normal;
        Vec3 pos = scene.primitives[prim].sample_point(u, v, &normal);
        field.positions_.push_back(pos);
        field.normals_.push_back(normal);
        const Material& m = scene.materials[scene.primitives[prim].material_id];
        field.fs_hint_.push_back(luminance(m.albedo) * kInvPi);
    }

    field.q_.assign(static_cast<size_t>(count) * n, 1.0);
    field.visits_.assign(static_cast<size_t>(count) * n, 0);
    field.dists_.resize(count);
    field.probe_grid_.build(field.positions_);
    field.rebuild_distributions();
    return field;
}

int QField::lookup(const Vec3& position, const Vec3& normal) const {
    return probe_grid_.nearest(position, normal, options_.normal_cos_min, positions_, normals_);
}

double QField::estimate_incident(int probe_id, const Vec3& wo, const Material& material,
                                 const Frame& frame, RngStream& rng) const {
    const int n = grid_.stratum_count();
    const double* q = &q_[static_cast<size_t>(probe_id) * n];
    double sum = 0;

    if (!material.glossy()) {
        // f_s is direction independent; only cos(theta_k) matters, so a
        // single uniform draw per stratum realizes omega_k's cosine.
        if (dot(wo, frame.normal) <= 0) return 0;
        double lum_f = luminance(material.albedo) * kInvPi;
        if (lum_f == 0) return 0;
        for (int band = 0; band < grid_.bands; ++band) {
            double band_sum = 0;
            for (int s = 0; s < grid_.sectors; ++s)
                band_sum += q[band * grid_.sectors + s] * ((band + rng.next()) / grid_.bands);
            sum += band_sum;
        }
        return kTwoPi / n * lum_f * sum;
    }

    for (int k = 0; k < n; ++k) {
        DirectionSample d = grid_.sample_in_stratum(frame, k, rng.next(), rng.next());
        double cos_k = dot(d.dir, frame.normal);
        sum += q[k] * luminance(bsdf_eval(material, d.dir, wo, frame)) * cos_k;
    }
    return kTwoPi / n * sum;
}

double QField::max_incident_target(int probe_id, const Vec3& wo, const Material& material,
                                   const Frame& frame) const {
    const int n = grid_.stratum_count();
    const double* q = &q_[static_cast<size_t>(probe_id) * n];
    double best = 0;
    if (!material.glossy()) {
        if (dot(wo, frame.normal) <= 0) return 0;
        double lum_f = luminance(material.albedo) * kInvPi;
        for (int k = 0; k < n; ++k)
            best = std::max(best, q[k] * lum_f * grid_.stratum_center_cos(k));
        return kTwoPi * best;
    }
    for (int k = 0; k < n; ++k) {
        Vec3 dir = grid_.stratum_center(frame, k);
        double f = luminance(bsdf_eval(material, dir, wo, frame));
        best = std::max(best, q[k] * f * grid_.stratum_center_cos(k));
    }
    return kTwoPi * best;
}

double QField::update_target(const Scene& scene, const Vec3& omega, const Hit& y_hit,
                             int probe_y, RngStream& rng) const {
    double reward = 0;
    double transport = 0;
    switch (y_hit.kind) {
        case Hit::Kind::Environment:
            reward = luminance(scene.environment->radiance(omega));
            break;
        case Hit::Kind::Escaped:
            reward = 0;
            break;
        case Hit::Kind::Surface: {
            const Material& m = scene.material_of(y_hit);
            reward = luminance(emitted(m, -omega, y_hit.normal));
            if (probe_y >= 0) {
                Frame frame_y = Frame::from_normal(faceforward(y_hit.normal, -omega));
                transport = options_.policy == GuidingPolicy::ExpectedSarsa
                                ? estimate_incident(probe_y, -omega, m, frame_y, rng)
                                : max_incident_target(probe_y, -omega, m, frame_y);
            }
            break;
        }
    }
    return reward + transport;
}

std::optional<double> QField::update(const Scene& scene, const Vec3& x, const Vec3& x_normal,
                                     const Vec3& omega, const Hit& y_hit, RngStream& rng) {
    int probe_x = lookup(x, x_normal);
    int probe_y = -1;
    if (y_hit.is_surface())
        probe_y = lookup(y_hit.point, faceforward(y_hit.normal, -omega));
    return update_cached(scene, probe_x, Frame::from_normal(x_normal), omega, y_hit, probe_y,
                         rng);
}

std::optional<double> QField::update_cached(const Scene& scene, int probe_x,
                                            const Frame& frame_x, const Vec3& omega,
                                            const Hit& y_hit, int probe_y, RngStream& rng) {
    if (probe_x < 0) {
        std::atomic_ref<uint64_t>(updates_skipped_).fetch_add(1, std::memory_order_relaxed);
        return std::nullopt;
    }
    int k = grid_.stratum_of(frame_x, omega);
    if (k < 0) {
        std::atomic_ref<uint64_t>(updates_skipped_).fetch_add(1, std::memory_order_relaxed);
        return std::nullopt;
    }
    double target = update_target(scene, omega, y_hit, probe_y, rng);
    if (!std::isfinite(target)) {
        std::atomic_ref<uint64_t>(updates_rejected_).fetch_add(1, std::memory_order_relaxed);
        return std::nullopt;
    }
    return apply_update(probe_x, k, target);
}

double QField::apply_update(int probe_id, int k, double target) {
    size_t idx = static_cast<size_t>(probe_id) * grid_.stratum_count() + k;
    uint32_t seen = std::atomic_ref<uint32_t>(visits_[idx]).fetch_add(1, std::memory_order_relaxed);
    double alpha = options_.alpha.value(seen);

    std::atomic_ref<double> q(q_[idx]);
    double old = q.load(std::memory_order_relaxed);
    double next;
    do {
        next = old + alpha * (target - old);
    } while (!q.compare_exchange_weak(old, next, std::memory_order_relaxed));
    std::atomic_ref<uint64_t>(updates_applied_).fetch_add(1, std::memory_order_relaxed);
    return next;
}

void QField::rebuild_distributions() {
    const int n = grid_.stratum_count();
    std::vector<double> w(n);
    for (int p = 0; p < probe_count(); ++p) {
        const double* q = &q_[static_cast<size_t>(p) * n];
        if (options_.sampling == GuidingSampling::ProportionalQ) {
            for (int k = 0; k < n; ++k) w[k] = q[k];
        } else {
            for (int k = 0; k < n; ++k) w[k] = q[k] * fs_hint_[p] * grid_.stratum_center_cos(k);
        }
        double total = 0;
        for (double x : w) total += x;
        double floor = options_.floor_scale * total / n;
        if (!(floor > 0)) {
            // All weights vanished: fall back to the uniform distribution.
            std::fill(w.begin(), w.end(), 1.0);
            floor = 1.0;
        }
        dists_[p] = DiscreteDistribution::build(w, floor);
    }
}

DirectionSample QField::sample_direction(int probe_id, const Frame& frame, double u1, double u2,
                                         double u3) const {
    DiscreteDistribution::Sample s = dists_[probe_id].sample(u1);
    DirectionSample d = grid_.sample_in_stratum(frame, s.index, u2, u3);
    d.pdf = s.probability * grid_.stratum_count() / kTwoPi;
    return d;
}

double QField::pdf_direction(int probe_id, const Frame& frame, const Vec3& dir) const {
    int k = grid_.stratum_of(frame, dir);
    if (k < 0) return 0;
    return dists_[probe_id].probability(k) * grid_.stratum_count() / kTwoPi;
}

void QField::dump_probes(std::ostream& out) const {
    const int n = grid_.stratum_count();
    for (int p = 0; p < probe_count(); ++p) {
        out << positions_[p].x << ' ' << positions_[p].y << ' ' << positions_[p].z << ' '
            << normals_[p].x << ' ' << normals_[p].y << ' ' << normals_[p].z;
        for (int k = 0; k < n; ++k) out << ' ' << q(p, k);
        out << '\n';
    }
}

double QField::min_floor_share_ratio() const {
    double worst = kInfinity;
    for (int p = 0; p < probe_count(); ++p) {
        const DiscreteDistribution& d = dists_[p];
        double share = d.floor_share();
        for (int k = 0; k < d.size(); ++k) worst = std::min(worst, d.probability(k) / share);
    }
    return worst;
}

}  // namespace rlpt
