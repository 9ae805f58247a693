// Copyright 2026 The rlpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rlpt/integrator.h"

namespace rlpt {

// Root-mean-square error over all pixels and channels. Throws
// std::invalid_argument on mismatched dimensions.
double rmse(const Image& a, const Image& b);

uint64_t fnv1a(const void* data, size_t size);
uint64_t scene_hash(const Scene& scene);

// Cache file for a reference render, keyed by scene hash, mode, resolution,
// iteration count, seed and learning-rate schedule.
std::string reference_image_path(const Scene& scene, const RenderConfig& config,
                                 Mode reference_mode, int reference_iterations,
                                 const std::string& cache_dir);

// Renders (or loads from `cache_dir`) a reference image for the scene:
// the given mode at `iterations` paths per pixel.
Image reference_image(const Scene& scene, const RenderConfig& config, Mode reference_mode,
                      int reference_iterations, const std::string& cache_dir);

struct ModeReport {
    Mode mode;
    double rmse_vs_reference = 0;
    double nonzero_fraction = 0;
    double avg_path_length = 0;
    double wall_ms = 0;
};

struct CompareOptions {
    std::vector<Mode> modes;
    int reference_factor = 64;  // reference budget multiplier (>= 64 per contract)
    Mode reference_mode = Mode::Bsdf;
    std::string cache_dir = "rlpt-cache";
};

// Renders every mode at the identical path budget and seed from the base
// configuration and reports its error against the shared cached reference.
std::vector<ModeReport> compare_modes(const Scene& scene, const RenderConfig& base,
                                      const CompareOptions& options);

// CSV: mode,rmse,nonzero_fraction,avg_path_length,wall_ms
void write_report_csv(std::ostream& out, const std::vector<ModeReport>& reports);

}  // namespace rlpt
