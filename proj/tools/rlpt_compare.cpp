// Copyright 2026 The rlpt Authors
// SPDX-License-Identifier: Apache-2.0

// Renders several sampling modes of the same scene at an identical path
// budget and seed, and reports RMSE against a shared high-sample reference
// (cached on disk, keyed by scene hash and budget).
//
//   rlpt-compare --scene scenes/door.json --modes bsdf,rl --spp 64 --out report.csv

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "rlpt/diagnostics.h"
#include "rlpt/scene_io.h"

using namespace rlpt;

int main(int argc, char** argv) {
    CLI::App app{"rlpt-compare: equal-budget mode comparison with cached references"};

    std::string scene_path, modes_text = "bsdf,rl", out_path, cache_dir = "rlpt-cache";
    int spp = 16, width = 128, height = 128, reference_factor = 64, threads = 0;
    uint64_t seed = 1;

    app.add_option("--scene", scene_path, "Scene description (JSON)")->required();
    app.add_option("--modes", modes_text, "Comma-separated mode list");
    app.add_option("--spp", spp, "Paths per pixel for every mode");
    app.add_option("--width", width, "Image width");
    app.add_option("--height", height, "Image height");
    app.add_option("--seed", seed, "RNG seed shared by all modes");
    app.add_option("--reference-factor", reference_factor,
                   "Reference budget multiplier (>= 64)");
    app.add_option("--cache", cache_dir, "Reference image cache directory");
    app.add_option("--threads", threads, "Worker threads (0 = auto)");
    app.add_option("--out", out_path, "Report CSV path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        Scene scene = load_scene(scene_path);

        RenderConfig base;
        base.width = width;
        base.height = height;
        base.iterations = spp;
        base.seed = seed;
        base.threads = threads;

        CompareOptions options;
        options.reference_factor = reference_factor;
        options.cache_dir = cache_dir;
        std::stringstream modes(modes_text);
        std::string token;
        while (std::getline(modes, token, ',')) options.modes.push_back(parse_mode(token));
        if (options.modes.empty()) throw std::invalid_argument("no modes given");

        auto reports = compare_modes(scene, base, options);
        if (out_path.empty()) {
            write_report_csv(std::cout, reports);
        } else {
            std::ofstream out(out_path);
            if (!out) throw std::runtime_error("cannot write " + out_path);
            write_report_csv(out, reports);
            std::cerr << "report written to " << out_path << std::endl;
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "rlpt-compare: " << e.what() << std::endl;
        return 1;
    }
}
