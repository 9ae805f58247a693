// Copyright 2026 The rlpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rlpt/distribution.h"
#include "rlpt/material.h"
#include "rlpt/rng.h"
#include "rlpt/scene.h"

namespace rlpt {

// Equal-solid-angle stratification of the upper hemisphere: `bands` uniform
// divisions of cos(theta) in [0,1] times `sectors` uniform divisions of phi
// in [0,2pi). Every stratum subtends 2 pi / n steradians.
struct HemisphereGrid {
    int bands = 8;
    int sectors = 16;

    int stratum_count() const { return bands * sectors; }
    double stratum_solid_angle() const { return kTwoPi / stratum_count(); }

    // k = sector(phi) + sectors * band(cos theta). Band 0 grazes the
    // horizon; band bands-1 contains the normal. Returns -1 for directions
    // below the horizon.
    int stratum_of(const Frame& frame, const Vec3& dir) const;

    // Uniform direction within stratum k; density is n / (2 pi) everywhere
    // in the stratum.
    DirectionSample sample_in_stratum(const Frame& frame, int k, double u, double v) const;

    Vec3 stratum_center(const Frame& frame, int k) const;
    double stratum_center_cos(int k) const { return (k / sectors + 0.5) / bands; }
};

// Learning-rate schedule: a constant alpha or the consistency schedule
// alpha = 1 / (1 + visits).
struct AlphaSchedule {
    enum class Kind { Constant, PerVisit };

    Kind kind = Kind::PerVisit;
    double constant = 0.5;

    double value(uint32_t visits) const {
        return kind == Kind::Constant ? constant : 1.0 / (1.0 + visits);
    }

    static AlphaSchedule per_visit() { return {Kind::PerVisit, 0}; }
    static AlphaSchedule constant_rate(double a) { return {Kind::Constant, a}; }
    // Parses "visits" or "const:<float>"; throws std::invalid_argument.
    static AlphaSchedule parse(const std::string& text);
    std::string to_string() const;
};

enum class GuidingPolicy { ExpectedSarsa, QMax };
enum class GuidingSampling { ProportionalQ, ProportionalQBsdfCos };

// Dense uniform grid over probe positions answering exact nearest-neighbor
// queries under a normal-compatibility filter.
class ProbeGrid {
public:
    void build(const std::vector<Vec3>& positions);
    // Nearest position with dot(normal[i], normal) >= cos_min; ties broken
    // toward the lower index. Returns -1 if none qualifies.
    int nearest(const Vec3& query, const Vec3& normal, double cos_min,
                const std::vector<Vec3>& positions, const std::vector<Vec3>& normals) const;

private:
    Aabb bounds_;
    int nx_ = 1, ny_ = 1, nz_ = 1;
    Vec3 cell_size_{1, 1, 1};
    std::vector<std::vector<int>> cells_;

    int cell_index(int ix, int iy, int iz) const { return (iz * ny_ + iy) * nx_ + ix; }
};

// The learned field of incident-radiance values: probes on the scene
// surfaces, each holding one value per hemisphere stratum, visit counts and
// a sampling CDF snapshot. Values are stored as scalar luminance; they only
// ever drive sampling densities.
class QField {
public:
    struct Options {
        GuidingPolicy policy = GuidingPolicy::ExpectedSarsa;
        GuidingSampling sampling = GuidingSampling::ProportionalQBsdfCos;
        AlphaSchedule alpha = AlphaSchedule::per_visit();
        double normal_cos_min = 0.7;
        double floor_scale = 1e-4;
    };

    // Places `count` probes by mapping a low-discrepancy point set onto the
    // scene surface: coordinate i/count selects a primitive through the
    // area-weighted CDF, two further radical-inverse dimensions select a
    // uniform point on it. All values start at 1 (positive, for
    // ergodicity). Throws on count < 1 or a zero-area scene.
    static QField place_probes(const Scene& scene, int count, const HemisphereGrid& grid,
                               const Options& options);

    // Nearest probe compatible with the query normal, or -1.
    int lookup(const Vec3& position, const Vec3& normal) const;

    // Stratified estimator of integral Q(y, w) f_s(w, y, wo) cos(theta) dw:
    // (2 pi / n) sum_k Q_k f_s(w_k) cos(theta_k), one fresh uniform w_k per
    // stratum. f_s enters as luminance.
    double estimate_incident(int probe_id, const Vec3& wo, const Material& material,
                             const Frame& frame, RngStream& rng) const;

    // Target of the max-update variant: the largest single-stratum estimate
    // 2 pi Q_k f_s cos(theta_k), taken at stratum centers.
    double max_incident_target(int probe_id, const Vec3& wo, const Material& material,
                               const Frame& frame) const;

    // TD update for the segment x -> y along omega. Looks up the probe at x
    // and, for the target's transport term, the probe at y. Returns the new
    // value, or nullopt when no probe covers x (counted) or the target is
    // not finite (rejected, counted).
    std::optional<double> update(const Scene& scene, const Vec3& x, const Vec3& x_normal,
                                 const Vec3& omega, const Hit& y_hit, RngStream& rng);

    // Same update with both probes supplied by the caller (the integrator
    // already knows them); probe_x < 0 skips, probe_y < 0 uses a zero
    // transport term.
    std::optional<double> update_cached(const Scene& scene, int probe_x, const Frame& frame_x,
                                        const Vec3& omega, const Hit& y_hit, int probe_y,
                                        RngStream& rng);

    // The TD arithmetic itself: q += alpha (target - q) with alpha from the
    // schedule and this (probe, stratum)'s visit count, which is
    // incremented. Atomic; safe from any number of threads.
    double apply_update(int probe_id, int k, double target);

    // Rebuilds every probe's sampling CDF from the current values, weighted
    // per the sampling mode, flooring at floor_scale x mean weight.
    void rebuild_distributions();

    // Draw a direction from the probe's CDF snapshot: stratum per u1,
    // uniform within the stratum per (u2, u3). pdf = P(k) n / (2 pi) > 0
    // for every upper-hemisphere direction.
    DirectionSample sample_direction(int probe_id, const Frame& frame, double u1, double u2,
                                     double u3) const;

    // Exact density realized by sample_direction; 0 below the horizon.
    double pdf_direction(int probe_id, const Frame& frame, const Vec3& dir) const;

    // One line per probe: position(3) normal(3) then the n values.
    void dump_probes(std::ostream& out) const;

    // Smallest probability-to-floor-share ratio over all probes and strata
    // (>= 1 means every stratum stays reachable).
    double min_floor_share_ratio() const;

    const HemisphereGrid& grid() const { return grid_; }
    const Options& options() const { return options_; }
    int probe_count() const { return static_cast<int>(positions_.size()); }
    const Vec3& probe_position(int i) const { return positions_[i]; }
    const Vec3& probe_normal(int i) const { return normals_[i]; }
    double q(int probe_id, int k) const { return q_[probe_id * grid_.stratum_count() + k]; }
    uint32_t visits(int probe_id, int k) const {
        return visits_[probe_id * grid_.stratum_count() + k];
    }
    const DiscreteDistribution& distribution(int probe_id) const { return dists_[probe_id]; }

    uint64_t updates_applied() const { return updates_applied_; }
    uint64_t updates_skipped() const { return updates_skipped_; }
    uint64_t updates_rejected() const { return updates_rejected_; }

    // Test hooks.
    void set_q(int probe_id, int k, double value) {
        q_[probe_id * grid_.stratum_count() + k] = value;
    }
    void set_policy(GuidingPolicy p) { options_.policy = p; }
    void set_sampling(GuidingSampling s) { options_.sampling = s; }

private:
    double update_target(const Scene& scene, const Vec3& omega, const Hit& y_hit, int probe_y,
                         RngStream& rng) const;

    HemisphereGrid grid_;
    Options options_;
    std::vector<Vec3> positions_;
    std::vector<Vec3> normals_;
    std::vector<double> fs_hint_;  // luminance(albedo)/pi of the probe's surface
    std::vector<double> q_;        // probe-major [probe * n + k]
    std::vector<uint32_t> visits_;
    std::vector<DiscreteDistribution> dists_;
    ProbeGrid probe_grid_;

    // Mutated through std::atomic_ref.
    uint64_t updates_applied_ = 0;
    uint64_t updates_skipped_ = 0;
    uint64_t updates_rejected_ = 0;
};

}  // namespace rlpt
