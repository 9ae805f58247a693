// Copyright 2026 The rlpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "rlpt/diagnostics.h"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "rlpt/image_io.h"
#include "rlpt/scene_io.h"

namespace rlpt {

double rmse(const Image& a, const Image& b) {
    if (a.width != b.width || a.height != b.height)
        throw std::invalid_argument("rmse: image dimensions differ");
    double sum = 0;
    for (size_t i = 0; i < a.pixels.size(); ++i) {
        Spectrum d = a.pixels[i] - b.pixels[i];
        sum += d.r * d.r + d.g * d.g + d.b * d.b;
    }
    return std::sqrt(sum / (a.pixels.size() * 3.0));
}

uint64_t fnv1a(const void* data, size_t size) {
    const uint8_t* bytes = static_cast<const uint8_t*>(data);
    uint64_t hash = 0xcbf29ce484222325ULL;
    for (size_t i = 0; i < size; ++i) {
        hash ^= bytes[i];
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

uint64_t scene_hash(const Scene& scene) {
    std::string text = serialize_scene(scene);
    return fnv1a(text.data(), text.size());
}

std::string reference_image_path(const Scene& scene, const RenderConfig& config,
                                 Mode reference_mode, int reference_iterations,
                                 const std::string& cache_dir) {
    std::ostringstream name;
    name << std::hex << scene_hash(scene) << std::dec << "_" << mode_name(reference_mode) << "_"
         << config.width << "x" << config.height << "_" << reference_iterations << "spp_s"
         << config.seed << "_a" << config.alpha.to_string() << ".pfm";
    return (std::filesystem::path(cache_dir) / name.str()).string();
}

Image reference_image(const Scene& scene, const RenderConfig& config, Mode reference_mode,
                      int reference_iterations, const std::string& cache_dir) {
    std::filesystem::create_directories(cache_dir);
    std::filesystem::path path =
        reference_image_path(scene, config, reference_mode, reference_iterations, cache_dir);

    if (std::filesystem::exists(path)) {
        Image cached = read_pfm(path.string());
        if (cached.width == config.width && cached.height == config.height) return cached;
    }

    RenderConfig ref = config;
    ref.mode = reference_mode;
    ref.iterations = reference_iterations;
    ref.learn = true;
    Image image = render(scene, ref).image;
    write_image(image, path.string(), ImageFormat::Pfm);
    return image;
}

std::vector<ModeReport> compare_modes(const Scene& scene, const RenderConfig& base,
                                      const CompareOptions& options) {
    Image reference = reference_image(scene, base, options.reference_mode,
                                      base.iterations * options.reference_factor,
                                      options.cache_dir);

    std::vector<ModeReport> reports;
    for (Mode mode : options.modes) {
        RenderConfig config = base;
        config.mode = mode;
        auto t0 = std::chrono::steady_clock::now();
        RenderResult result = render(scene, config);
        double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        ModeReport report;
        report.mode = mode;
        report.rmse_vs_reference = rmse(result.image, reference);
        report.nonzero_fraction = result.stats.nonzero_fraction();
        report.avg_path_length = result.stats.avg_path_length();
        report.wall_ms = ms;
        reports.push_back(report);
    }
    return reports;
}

void write_report_csv(std::ostream& out, const std::vector<ModeReport>& reports) {
    out << "mode,rmse,nonzero_fraction,avg_path_length,wall_ms\n";
    for (const ModeReport& r : reports)
        out << mode_name(r.mode) << ',' << r.rmse_vs_reference << ',' << r.nonzero_fraction
            << ',' << r.avg_path_length << ',' << r.wall_ms << '\n';
}

}  // namespace rlpt
