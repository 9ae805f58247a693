// Copyright 2026 The rlpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "rlpt/distribution.h"
#include "rlpt/guiding.h"
#include "rlpt/light.h"
#include "rlpt/math.h"

namespace rlpt {

// Regular grid over the scene bounds; positions outside are clamped to the
// boundary cells (floor convention per axis).
struct SpatialGrid {
    Aabb bounds;
    int nx = 16, ny = 16, nz = 16;

    int cell_count() const { return nx * ny * nz; }
    int cell_of(const Vec3& p) const;
};

// Per-cell, per-light TD-learned values driving next event estimation: each
// value tracks the infinity norm of the light's unoccluded contribution as
// seen from points in the cell (occluded samples count as zero), so light
// selection learns visibility.
class LightSelectionGrid {
public:
    LightSelectionGrid() = default;
    LightSelectionGrid(const Aabb& bounds, int nx, int ny, int nz, int light_count,
                       AlphaSchedule alpha, double floor_scale);

    int cell_of(const Vec3& p) const { return grid_.cell_of(p); }
    int light_count() const { return light_count_; }
    int cell_count() const { return grid_.cell_count(); }

    // V' = (1 - alpha) V + alpha ||contribution||_inf. Returns the new
    // value, or nullopt for a non-finite contribution (counted).
    std::optional<double> update_value(int cell, int light, const Spectrum& contribution);

    // Light index drawn from the cell's CDF snapshot with its probability.
    std::pair<int, double> select_light(int cell, double u) const;

    // Rebuilds every cell's CDF from the current values.
    void rebuild();

    double value(int cell, int light) const { return values_[index(cell, light)]; }
    uint32_t visits(int cell, int light) const { return visits_[index(cell, light)]; }
    uint64_t cell_updates(int cell) const { return cell_updates_[cell]; }
    const DiscreteDistribution& distribution(int cell) const { return dists_[cell]; }

    // CSV rows "cell,light,value".
    void dump(std::ostream& out) const;

    double min_floor_share_ratio() const;

    uint64_t updates_rejected() const { return updates_rejected_; }

private:
    size_t index(int cell, int light) const {
        return static_cast<size_t>(cell) * light_count_ + light;
    }

    SpatialGrid grid_;
    int light_count_ = 0;
    AlphaSchedule alpha_;
    double floor_scale_ = 1e-4;
    std::vector<double> values_;
    std::vector<uint32_t> visits_;
    std::vector<uint64_t> cell_updates_;
    std::vector<DiscreteDistribution> dists_;
    uint64_t updates_rejected_ = 0;
};

// The environment analog: per cell, one learned importance per tile of the
// environment sphere. Tiles partition the (phi, cos theta) chart uniformly,
// so each subtends 4 pi / T steradians. Values start proportional to tile
// brightness (the classic environment-sampling heuristic); with a constant
// learning rate of zero the grid therefore reproduces plain
// brightness-proportional sampling.
class EnvTileGrid {
public:
    EnvTileGrid() = default;
    EnvTileGrid(const Aabb& bounds, int nx, int ny, int nz, int tiles_phi, int tiles_cos,
                const EnvironmentLight& env, AlphaSchedule alpha, double floor_scale);

    int cell_of(const Vec3& p) const { return grid_.cell_of(p); }
    int tile_count() const { return tiles_phi_ * tiles_cos_; }
    int cell_count() const { return grid_.cell_count(); }

    int tile_of(const Vec3& dir) const;

    std::pair<int, double> select_tile(int cell, double u) const;

    // Uniform direction within the tile; pdf is the within-tile density
    // T / (4 pi). The full selection density is P(tile) * T / (4 pi).
    DirectionSample sample_dir_in_tile(int tile, double u, double v) const;

    // Full density of select_tile + sample_dir_in_tile for a direction.
    double pdf_dir(int cell, const Vec3& dir) const;

    std::optional<double> update_value(int cell, int tile, const Spectrum& contribution);

    void rebuild();

    double value(int cell, int tile) const { return values_[index(cell, tile)]; }
    uint64_t cell_updates(int cell) const { return cell_updates_[cell]; }
    const DiscreteDistribution& distribution(int cell) const { return dists_[cell]; }

    void dump(std::ostream& out) const;
    double min_floor_share_ratio() const;

private:
    size_t index(int cell, int tile) const {
        return static_cast<size_t>(cell) * tile_count() + tile;
    }

    SpatialGrid grid_;
    int tiles_phi_ = 16, tiles_cos_ = 8;
    AlphaSchedule alpha_;
    double floor_scale_ = 1e-4;
    std::vector<double> values_;
    std::vector<uint32_t> visits_;
    std::vector<uint64_t> cell_updates_;
    std::vector<DiscreteDistribution> dists_;
    uint64_t updates_rejected_ = 0;
};

}  // namespace rlpt
