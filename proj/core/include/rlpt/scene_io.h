// Copyright 2026 The rlpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "rlpt/integrator.h"
#include "rlpt/scene.h"

namespace rlpt {

// Raised for any scene-file problem; parse errors carry line/column, all
// semantic errors name the offending entity.
class SceneError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SceneFile {
    Scene scene;
    // Named render presets, kept as raw JSON objects.
    std::map<std::string, std::string> presets;
};

// Parses and fully validates the JSON scene description. The returned scene
// is built (lights derived, BVH ready).
SceneFile load_scene_file(const std::string& path);
Scene load_scene(const std::string& path);

// Parse from a string; `origin` names the source in error messages.
SceneFile parse_scene_text(const std::string& text, const std::string& origin);

// Canonical JSON for the scene; parse_scene_text(serialize_scene(s)) yields
// an equivalent scene.
std::string serialize_scene(const Scene& scene);

// Overlays a preset object (JSON text) onto a render configuration.
// Recognized keys: width, height, iterations, spp, max_depth, mode, alpha,
// probes, bands, sectors, grid, floor, seed, threads, env_samples.
void apply_preset(RenderConfig& config, const std::string& preset_json);

}  // namespace rlpt
