// Copyright 2026 The rlpt Authors
// SPDX-License-Identifier: Apache-2.0

// Progressive path tracer with reinforcement-learned importance sampling.
//
//   rlpt --scene scenes/cornell.json --out image.pfm --mode rl --spp 64

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rlpt/diagnostics.h"
#include "rlpt/image_io.h"
#include "rlpt/integrator.h"
#include "rlpt/scene_io.h"

using namespace rlpt;

namespace {

struct CliOptions {
    std::string scene_path;
    std::string out_path = "out.pfm";
    std::string mode = "bsdf";
    std::string alpha = "visits";
    std::string strata = "8x16";
    std::string grid = "16,16,16";
    std::string preset;
    std::string stats_path;
    std::string dump_probes_path;
    std::string dump_lightgrid_path;
    int spp = 16;
    int width = 256;
    int height = 256;
    int max_depth = 32;
    int probes = 1024;
    double floor = 1e-4;
    uint64_t seed = 1;
    int threads = 0;
    int env_samples = 4;
    bool deterministic = false;
};

void parse_strata(const std::string& text, int* bands, int* sectors) {
    auto x = text.find('x');
    if (x == std::string::npos) throw CLI::ValidationError("--strata", "expected BANDSxSECTORS");
    *bands = std::stoi(text.substr(0, x));
    *sectors = std::stoi(text.substr(x + 1));
    if (*bands < 1 || *sectors < 1)
        throw CLI::ValidationError("--strata", "counts must be positive");
}

void parse_grid(const std::string& text, int* nx, int* ny, int* nz) {
    int vals[3];
    size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
        size_t comma = i < 2 ? text.find(',', pos) : text.size();
        if (comma == std::string::npos) throw CLI::ValidationError("--grid", "expected NX,NY,NZ");
        vals[i] = std::stoi(text.substr(pos, comma - pos));
        pos = comma + 1;
    }
    *nx = vals[0];
    *ny = vals[1];
    *nz = vals[2];
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rlpt: progressive path tracing with online-learned importance sampling"};
    CliOptions opt;

    app.add_option("--scene", opt.scene_path, "Scene description (JSON)")->required();
    app.add_option("--out", opt.out_path, "Output image (.pfm or .ppm)");
    app.add_option("--spp", opt.spp, "Paths per pixel (progressive iterations)");
    app.add_option("--mode", opt.mode, "bsdf|rl|rl_max|nee_td|rl_nee_td|env_rl");
    app.add_option("--width", opt.width, "Image width");
    app.add_option("--height", opt.height, "Image height");
    app.add_option("--max-depth", opt.max_depth, "Path length cutoff");
    app.add_option("--probes", opt.probes, "Probe count for guided modes");
    app.add_option("--strata", opt.strata, "Hemisphere strata as BANDSxSECTORS");
    app.add_option("--alpha", opt.alpha, "Learning rate: visits or const:F");
    app.add_option("--grid", opt.grid, "Light/env selection grid as NX,NY,NZ");
    app.add_option("--floor", opt.floor, "CDF floor scale");
    app.add_option("--seed", opt.seed, "RNG seed");
    app.add_option("--threads", opt.threads, "Worker threads (0 = auto)");
    app.add_option("--env-samples", opt.env_samples, "Environment NEE samples per vertex");
    app.add_flag("--deterministic", opt.deterministic,
                 "Bit-reproducible output (forces one thread)");
    app.add_option("--stats", opt.stats_path, "Write per-iteration statistics CSV");
    app.add_option("--dump-probes", opt.dump_probes_path, "Write probe values as text");
    app.add_option("--dump-lightgrid", opt.dump_lightgrid_path,
                   "Write light/env grid values as CSV");
    app.add_option("--preset", opt.preset, "Apply a named preset from the scene file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help() << std::endl;
        return 2;
    }

    try {
        SceneFile file = load_scene_file(opt.scene_path);

        // Defaults, then the preset, then explicit flags. The CLI defaults
        // above equal the RenderConfig defaults, so only flags the user
        // actually passed need to override the preset.
        RenderConfig config;
        if (!opt.preset.empty()) {
            auto it = file.presets.find(opt.preset);
            if (it == file.presets.end())
                throw SceneError(opt.scene_path + ": no preset named '" + opt.preset + "'");
            apply_preset(config, it->second);
        } else {
            config.width = opt.width;
            config.height = opt.height;
            config.iterations = opt.spp;
            config.mode = parse_mode(opt.mode);
            config.max_depth = opt.max_depth;
            config.probe_count = opt.probes;
            config.alpha = AlphaSchedule::parse(opt.alpha);
            config.floor_scale = opt.floor;
            config.seed = opt.seed;
            config.env_samples = opt.env_samples;
            parse_strata(opt.strata, &config.bands, &config.sectors);
            parse_grid(opt.grid, &config.grid_nx, &config.grid_ny, &config.grid_nz);
        }
        if (app.count("--width")) config.width = opt.width;
        if (app.count("--height")) config.height = opt.height;
        if (app.count("--spp")) config.iterations = opt.spp;
        if (app.count("--mode")) config.mode = parse_mode(opt.mode);
        if (app.count("--max-depth")) config.max_depth = opt.max_depth;
        if (app.count("--probes")) config.probe_count = opt.probes;
        if (app.count("--alpha")) config.alpha = AlphaSchedule::parse(opt.alpha);
        if (app.count("--floor")) config.floor_scale = opt.floor;
        if (app.count("--seed")) config.seed = opt.seed;
        if (app.count("--env-samples")) config.env_samples = opt.env_samples;
        if (app.count("--strata")) parse_strata(opt.strata, &config.bands, &config.sectors);
        if (app.count("--grid"))
            parse_grid(opt.grid, &config.grid_nx, &config.grid_ny, &config.grid_nz);
        config.threads = opt.threads;
        config.deterministic = opt.deterministic;

        GuidingState state = GuidingState::create(file.scene, config);
        RenderResult result = render(file.scene, config, &state);
        write_image(result.image, opt.out_path);

        if (!opt.stats_path.empty()) {
            std::ofstream stats(opt.stats_path);
            if (!stats) throw std::runtime_error("cannot write " + opt.stats_path);
            write_stats_csv(stats, config, result.stats);
        }
        if (!opt.dump_probes_path.empty() && state.qfield) {
            std::ofstream dump(opt.dump_probes_path);
            if (!dump) throw std::runtime_error("cannot write " + opt.dump_probes_path);
            state.qfield->dump_probes(dump);
        }
        if (!opt.dump_lightgrid_path.empty()) {
            std::ofstream dump(opt.dump_lightgrid_path);
            if (!dump) throw std::runtime_error("cannot write " + opt.dump_lightgrid_path);
            if (state.light_grid) state.light_grid->dump(dump);
            if (state.env_grid) state.env_grid->dump(dump);
        }

        std::fprintf(stderr,
                     "%s: %dx%d, %d spp, mode %s | nonzero %.1f%%, avg length %.2f, "
                     "%llu q-updates\n",
                     opt.out_path.c_str(), config.width, config.height, config.iterations,
                     mode_name(config.mode), 100.0 * result.stats.nonzero_fraction(),
                     result.stats.avg_path_length(),
                     static_cast<unsigned long long>(result.stats.q_updates));
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "rlpt: " << e.what() << std::endl;
        return 1;
    }
}
