// Copyright 2026 The rlpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "rlpt/light_select.h"

#include <atomic>
#include <cmath>
#include <ostream>

namespace rlpt {

namespace {

// Shared TD arithmetic: v += alpha (target - v), alpha from the schedule
// and the slot's visit count.
double td_update(double& value, uint32_t& visits, const AlphaSchedule& schedule,
                 double target) {
    uint32_t seen = std::atomic_ref<uint32_t>(visits).fetch_add(1, std::memory_order_relaxed);
    double alpha = schedule.value(seen);
    std::atomic_ref<double> v(value);
    double old = v.load(std::memory_order_relaxed);
    double next;
    do {
        next = old + alpha * (target - old);
    } while (!v.compare_exchange_weak(old, next, std::memory_order_relaxed));
    return next;
}

void rebuild_cells(const std::vector<double>& values, int per_cell, double floor_scale,
                   std::vector<DiscreteDistribution>& dists) {
    std::vector<double> w(per_cell);
    for (size_t c = 0; c < dists.size(); ++c) {
        double total = 0;
        for (int i = 0; i < per_cell; ++i) {
            w[i] = values[c * per_cell + i];
            total += w[i];
        }
        double floor = floor_scale * total / per_cell;
        if (!(floor > 0)) {
            std::fill(w.begin(), w.end(), 1.0);
            floor = 1.0;
        }
        dists[c] = DiscreteDistribution::build(w, floor);
    }
}

double min_ratio(const std::vector<DiscreteDistribution>& dists) {
    double worst = kInfinity;
    for (const DiscreteDistribution& d : dists) {
        double share = d.floor_share();
        for (int i = 0; i < d.size(); ++i) worst = std::min(worst, d.probability(i) / share);
    }
    return worst;
}

}  // namespace

int SpatialGrid::cell_of(const Vec3& p) const {
    Vec3 e = bounds.extent();
    Vec3 rel = p - bounds.lo;
    int ix = e.x > 0 ? std::clamp(static_cast<int>(rel.x / e.x * nx), 0, nx - 1) : 0;
    int iy = e.y > 0 ? std::clamp(static_cast<int>(rel.y / e.y * ny), 0, ny - 1) : 0;
    int iz = e.z > 0 ? std::clamp(static_cast<int>(rel.z / e.z * nz), 0, nz - 1) : 0;
    return (iz * ny + iy) * nx + ix;
}

LightSelectionGrid::LightSelectionGrid(const Aabb& bounds, int nx, int ny, int nz,
                                       int light_count, AlphaSchedule alpha,
                                       double floor_scale)
    : grid_{bounds, nx, ny, nz},
      light_count_(light_count),
      alpha_(alpha),
      floor_scale_(floor_scale) {
    // Values start at zero; the CDF floor keeps every light reachable.
    values_.assign(static_cast<size_t>(grid_.cell_count()) * light_count_, 0.0);
    visits_.assign(values_.size(), 0);
    cell_updates_.assign(grid_.cell_count(), 0);
    dists_.resize(grid_.cell_count());
    if (light_count_ > 0) rebuild();
}

std::optional<double> LightSelectionGrid::update_value(int cell, int light,
                                                       const Spectrum& contribution) {
    if (!contribution.is_finite()) {
        std::atomic_ref<uint64_t>(updates_rejected_).fetch_add(1, std::memory_order_relaxed);
        return std::nullopt;
    }
    double target = contribution.max_component();  // infinity norm
    std::atomic_ref<uint64_t>(cell_updates_[cell]).fetch_add(1, std::memory_order_relaxed);
    size_t i = index(cell, light);
    return td_update(values_[i], visits_[i], alpha_, target);
}

std::pair<int, double> LightSelectionGrid::select_light(int cell, double u) const {
    DiscreteDistribution::Sample s = dists_[cell].sample(u);
    return {s.index, s.probability};
}

void LightSelectionGrid::rebuild() {
    rebuild_cells(values_, light_count_, floor_scale_, dists_);
}

void LightSelectionGrid::dump(std::ostream& out) const {
    out << "cell,light,value\n";
    for (int c = 0; c < grid_.cell_count(); ++c)
        for (int l = 0; l < light_count_; ++l)
            out << c << ',' << l << ',' << value(c, l) << '\n';
}

double LightSelectionGrid::min_floor_share_ratio() const { return min_ratio(dists_); }

EnvTileGrid::EnvTileGrid(const Aabb& bounds, int nx, int ny, int nz, int tiles_phi,
                         int tiles_cos, const EnvironmentLight& env, AlphaSchedule alpha,
                         double floor_scale)
    : grid_{bounds, nx, ny, nz},
      tiles_phi_(tiles_phi),
      tiles_cos_(tiles_cos),
      alpha_(alpha),
      floor_scale_(floor_scale) {
    const int t = tile_count();
    std::vector<double> brightness(t);
    for (int j = 0; j < tiles_cos_; ++j)
        for (int i = 0; i < tiles_phi_; ++i) {
            double u0 = static_cast<double>(i) / tiles_phi_;
            double u1 = static_cast<double>(i + 1) / tiles_phi_;
            double v0 = static_cast<double>(j) / tiles_cos_;
            double v1 = static_cast<double>(j + 1) / tiles_cos_;
            brightness[j * tiles_phi_ + i] = env.mean_luminance(u0, u1, v0, v1);
        }

    values_.resize(static_cast<size_t>(grid_.cell_count()) * t);
    for (int c = 0; c < grid_.cell_count(); ++c)
        for (int i = 0; i < t; ++i) values_[index(c, i)] = brightness[i];
    visits_.assign(values_.size(), 0);
    cell_updates_.assign(grid_.cell_count(), 0);
    dists_.resize(grid_.cell_count());
    rebuild();
}

int EnvTileGrid::tile_of(const Vec3& dir) const {
    double u, v;
    env_uv_from_dir(dir, &u, &v);
    int i = std::min(static_cast<int>(u * tiles_phi_), tiles_phi_ - 1);
    int j = std::min(static_cast<int>(v * tiles_cos_), tiles_cos_ - 1);
    return j * tiles_phi_ + i;
}

std::pair<int, double> EnvTileGrid::select_tile(int cell, double u) const {
    DiscreteDistribution::Sample s = dists_[cell].sample(u);
    return {s.index, s.probability};
}

DirectionSample EnvTileGrid::sample_dir_in_tile(int tile, double u, double v) const {
    int j = tile / tiles_phi_;
    int i = tile % tiles_phi_;
    double tu = (i + u) / tiles_phi_;
    double tv = (j + v) / tiles_cos_;
    return {env_dir_from_uv(tu, tv), tile_count() / kFourPi};
}

double EnvTileGrid::pdf_dir(int cell, const Vec3& dir) const {
    int tile = tile_of(dir);
    return dists_[cell].probability(tile) * tile_count() / kFourPi;
}

std::optional<double> EnvTileGrid::update_value(int cell, int tile,
                                                const Spectrum& contribution) {
    if (!contribution.is_finite()) {
        std::atomic_ref<uint64_t>(updates_rejected_).fetch_add(1, std::memory_order_relaxed);
        return std::nullopt;
    }
    double target = contribution.max_component();
    std::atomic_ref<uint64_t>(cell_updates_[cell]).fetch_add(1, std::memory_order_relaxed);
    size_t i = index(cell, tile);
    return td_update(values_[i], visits_[i], alpha_, target);
}

void EnvTileGrid::rebuild() { rebuild_cells(values_, tile_count(), floor_scale_, dists_); }

void EnvTileGrid::dump(std::ostream& out) const {
    out << "cell,tile,value\n";
    for (int c = 0; c < grid_.cell_count(); ++c)
        for (int t = 0; t < tile_count(); ++t) out << c << ',' << t << ',' << value(c, t) << '\n';
}

double EnvTileGrid::min_floor_share_ratio() const { return min_ratio(dists_); }

}  // namespace rlpt
