// Copyright 2026 The rlpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rlpt/guiding.h"
#include "rlpt/light_select.h"
#include "rlpt/scene.h"

namespace rlpt {

// Sampling policy of the progressive tracer:
//   bsdf      cosine/BSDF importance sampling, radiance picked up by hitting
//             emitters (the baseline).
//   rl        scattering from the learned field, expected-SARSA updates.
//   rl_max    scattering from the learned field, max-target updates.
//   nee_td    BSDF scattering plus next event estimation with TD-learned
//             light selection.
//   rl_nee_td rl scattering combined with nee_td connections.
//   env_rl    BSDF scattering plus environment next event estimation with
//             TD-learned tile importance per cell.
enum class Mode { Bsdf, Rl, RlMax, NeeTd, RlNeeTd, EnvRl };

Mode parse_mode(const std::string& name);
const char* mode_name(Mode mode);

inline bool mode_uses_qfield(Mode m) {
    return m == Mode::Rl || m == Mode::RlMax || m == Mode::RlNeeTd;
}
inline bool mode_uses_light_grid(Mode m) { return m == Mode::NeeTd || m == Mode::RlNeeTd; }
inline bool mode_uses_env_grid(Mode m) { return m == Mode::EnvRl; }

struct RenderConfig {
    int width = 256;
    int height = 256;
    int iterations = 16;  // paths per pixel
    int max_depth = 32;
    int rr_depth = 5;  // Russian roulette beyond this vertex index
    Mode mode = Mode::Bsdf;
    AlphaSchedule alpha = AlphaSchedule::per_visit();
    int probe_count = 1024;
    int bands = 8;
    int sectors = 16;
    int grid_nx = 16, grid_ny = 16, grid_nz = 16;
    int env_tiles_phi = 16, env_tiles_cos = 8;
    double floor_scale = 1e-4;
    double normal_cos_min = 0.7;
    uint64_t seed = 1;
    int threads = 0;            // 0 = all hardware threads
    bool deterministic = false; // forces a single thread
    bool learn = true;          // false freezes all guiding structures
    bool track_variance = false;
    int env_samples = 4;  // environment NEE draws per vertex (env_rl)
    std::optional<GuidingSampling> sampling_override;

    int pixel_count() const { return width * height; }
};

struct Image {
    int width = 0, height = 0;
    std::vector<Spectrum> pixels;

    Image() = default;
    Image(int w, int h) : width(w), height(h), pixels(static_cast<size_t>(w) * h) {}
    Spectrum& at(int x, int y) { return pixels[static_cast<size_t>(y) * width + x]; }
    const Spectrum& at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
};

struct IterationStats {
    int iteration = 0;
    uint64_t paths = 0;
    uint64_t nonzero_paths = 0;
    double avg_path_length = 0;
    double ms_elapsed = 0;
};

struct RenderStats {
    uint64_t paths_total = 0;
    uint64_t paths_nonzero = 0;
    uint64_t sum_path_length = 0;
    uint64_t q_updates = 0;
    uint64_t lookup_failures = 0;
    uint64_t nan_paths = 0;
    std::vector<IterationStats> iterations;

    double nonzero_fraction() const {
        return paths_total ? static_cast<double>(paths_nonzero) / paths_total : 0.0;
    }
    double avg_path_length() const {
        return paths_total ? static_cast<double>(sum_path_length) / paths_total : 0.0;
    }
    // Same metrics restricted to iterations >= first (post-warm-up view).
    double nonzero_fraction_from(int first) const;
    double avg_path_length_from(int first) const;
};

// One row per iteration plus a self-describing header with every
// configuration value in effect.
void write_stats_csv(std::ostream& out, const RenderConfig& config, const RenderStats& stats);

// The learned structures a render reads and updates. Create once and pass
// to several render() calls to warm-start or freeze learning.
struct GuidingState {
    std::optional<QField> qfield;
    std::optional<LightSelectionGrid> light_grid;
    std::optional<EnvTileGrid> env_grid;

    static GuidingState create(const Scene& scene, const RenderConfig& config);
};

struct PathResult {
    Spectrum radiance{0.0};
    int length = 0;
    bool nonzero = false;
};

struct PathCounters {
    uint64_t nonzero = 0;
    uint64_t sum_length = 0;
    uint64_t nan_paths = 0;
    uint64_t q_fallbacks = 0;
};

// Traces one light transport path. Guided modes update the field for every
// segment after the first vertex, then terminate on emitters/environment
// and otherwise scatter by the mode's policy; throughput always divides by
// the exact pdf of the sampled direction.
PathResult trace_path(const Scene& scene, const RenderConfig& config, GuidingState* state,
                      const Ray& ray, RngStream& rng, PathCounters& counters);

// Next event estimation with TD-learned light selection. Returns the
// contribution already divided by the selection probability; the value
// learned per (cell, light) is the pre-selection contribution norm, zero
// when occluded.
Spectrum next_event(const Scene& scene, LightSelectionGrid& grid, const Vec3& x,
                    const Frame& frame, const Material& material, const Vec3& wo,
                    RngStream& rng, bool learn);

// Environment next event estimation with TD-learned tile importance.
Spectrum next_event_env(const Scene& scene, EnvTileGrid& grid, const Vec3& x,
                        const Frame& frame, const Material& material, const Vec3& wo,
                        RngStream& rng, bool learn, int samples);

struct RenderResult {
    Image image;
    RenderStats stats;
    // Present when track_variance: per-pixel sample variance of luminance
    // divided by the sample count (variance of the accumulated mean).
    std::vector<double> luminance_mean;
    std::vector<double> luminance_var_of_mean;
};

// Progressive render: one camera path per pixel per iteration, guiding CDFs
// rebuilt between iterations while learning is enabled.
RenderResult render(const Scene& scene, const RenderConfig& config,
                    GuidingState* state = nullptr);

}  // namespace rlpt
