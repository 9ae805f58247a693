// Copyright 2026 The rlpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "rlpt/scene_io.h"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rlpt {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& message) {
    throw SceneError(origin + ": " + message);
}

// Byte offset -> "line L, column C" for parse errors.
std::string line_column(const std::string& text, size_t byte) {
    size_t line = 1, column = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

double finite_number(const json& j, const std::string& origin, const std::string& what) {
    if (!j.is_number()) fail(origin, what + " must be a number");
    double v = j.get<double>();
    if (!std::isfinite(v)) fail(origin, what + " must be finite");
    return v;
}

Vec3 parse_vec3(const json& j, const std::string& origin, const std::string& what) {
    if (!j.is_array() || j.size() != 3) fail(origin, what + " must be an array of 3 numbers");
    return {finite_number(j[0], origin, what), finite_number(j[1], origin, what),
            finite_number(j[2], origin, what)};
}

Spectrum parse_spectrum(const json& j, const std::string& origin, const std::string& what) {
    Vec3 v = parse_vec3(j, origin, what);
    return {v.x, v.y, v.z};
}

json vec3_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }
json spectrum_json(const Spectrum& s) { return json::array({s.r, s.g, s.b}); }

}  // namespace

SceneFile parse_scene_text(const std::string& text, const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(origin, "parse error at " + line_column(text, e.byte > 0 ? e.byte - 1 : 0) + ": " +
                         e.what());
    }
    if (!root.is_object()) fail(origin, "top level must be an object");

    SceneFile file;
    Scene& scene = file.scene;

    if (!root.contains("camera")) fail(origin, "missing camera");
    {
        const json& c = root["camera"];
        scene.camera.position = parse_vec3(c.at("position"), origin, "camera.position");
        scene.camera.look_at = parse_vec3(c.at("look_at"), origin, "camera.look_at");
        scene.camera.up = c.contains("up") ? parse_vec3(c["up"], origin, "camera.up")
                                           : Vec3(0, 1, 0);
        scene.camera.vfov_degrees =
            c.contains("fov_degrees") ? finite_number(c["fov_degrees"], origin, "fov") : 45.0;
        if (!(scene.camera.vfov_degrees > 0 && scene.camera.vfov_degrees < 180))
            fail(origin, "camera.fov_degrees must lie in (0, 180)");
        if (length(scene.camera.look_at - scene.camera.position) == 0)
            fail(origin, "camera.look_at must differ from camera.position");
    }

    std::map<std::string, int> material_index;
    for (const json& m : root.value("materials", json::array())) {
        Material mat;
        mat.name = m.value("name", "material" + std::to_string(scene.materials.size()));
        if (material_index.count(mat.name)) fail(origin, "duplicate material '" + mat.name + "'");
        if (m.contains("albedo")) mat.albedo = parse_spectrum(m["albedo"], origin, "albedo");
        if (m.contains("emission"))
            mat.emission = parse_spectrum(m["emission"], origin, "emission");
        if (m.contains("phong_exponent"))
            mat.phong_exponent = finite_number(m["phong_exponent"], origin, "phong_exponent");
        for (double a : {mat.albedo.r, mat.albedo.g, mat.albedo.b})
            if (a < 0 || a > 1)
                fail(origin, "material '" + mat.name + "': albedo must lie in [0,1]");
        for (double e : {mat.emission.r, mat.emission.g, mat.emission.b})
            if (e < 0) fail(origin, "material '" + mat.name + "': emission must be >= 0");
        if (mat.phong_exponent < 0)
            fail(origin, "material '" + mat.name + "': phong_exponent must be >= 0");
        material_index[mat.name] = static_cast<int>(scene.materials.size());
        scene.materials.push_back(mat);
    }

    if ((!root.contains("primitives") || root["primitives"].empty()) &&
        !root.contains("environment"))
        fail(origin, "scene needs at least one primitive or an environment");
    int prim_i = 0;
    for (const json& p : root.value("primitives", json::array())) {
        std::string where = "primitive " + std::to_string(prim_i);
        std::string mat_name = p.value("material", "");
        auto it = material_index.find(mat_name);
        if (it == material_index.end())
            fail(origin, where + ": unresolved material '" + mat_name + "'");
        std::string type = p.value("type", "");
        try {
            if (type == "sphere") {
                scene.primitives.push_back(
                    Primitive::sphere(parse_vec3(p.at("center"), origin, where + ".center"),
                                      finite_number(p.at("radius"), origin, where + ".radius"),
                                      it->second));
            } else if (type == "quad") {
                scene.primitives.push_back(
                    Primitive::quad(parse_vec3(p.at("corner"), origin, where + ".corner"),
                                    parse_vec3(p.at("edge_u"), origin, where + ".edge_u"),
                                    parse_vec3(p.at("edge_v"), origin, where + ".edge_v"),
                                    it->second));
            } else if (type == "triangle") {
                const json& v = p.at("vertices");
                if (!v.is_array() || v.size() != 3)
                    fail(origin, where + ": triangle needs 3 vertices");
                scene.primitives.push_back(
                    Primitive::triangle(parse_vec3(v[0], origin, where + ".v0"),
                                        parse_vec3(v[1], origin, where + ".v1"),
                                        parse_vec3(v[2], origin, where + ".v2"), it->second));
            } else {
                fail(origin, where + ": unknown type '" + type + "'");
            }
        } catch (const std::invalid_argument& e) {
            fail(origin, where + ": " + e.what());
        }
        ++prim_i;
    }

    if (root.contains("environment")) {
        const json& e = root["environment"];
        if (e.contains("constant")) {
            Spectrum c = parse_spectrum(e["constant"], origin, "environment.constant");
            if (c.r < 0 || c.g < 0 || c.b < 0)
                fail(origin, "environment radiance must be >= 0");
            scene.environment = EnvironmentLight::constant(c);
        } else if (e.contains("lattice")) {
            const json& l = e["lattice"];
            int w = l.value("width", 0), h = l.value("height", 0);
            std::vector<Spectrum> texels;
            for (const json& t : l.value("texels", json::array()))
                texels.push_back(parse_spectrum(t, origin, "environment texel"));
            try {
                scene.environment = EnvironmentLight::lattice(w, h, std::move(texels));
            } catch (const std::invalid_argument& err) {
                fail(origin, std::string("environment: ") + err.what());
            }
        } else {
            fail(origin, "environment must define 'constant' or 'lattice'");
        }
    }

    for (auto& [name, preset] : root.value("presets", json::object()).items()) {
        if (!preset.is_object()) fail(origin, "preset '" + name + "' must be an object");
        file.presets[name] = preset.dump();
    }

    try {
        scene.build();
    } catch (const std::invalid_argument& e) {
        fail(origin, e.what());
    }
    return file;
}

SceneFile load_scene_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SceneError(path + ": cannot open file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scene_text(buf.str(), path);
}

Scene load_scene(const std::string& path) { return load_scene_file(path).scene; }

std::string serialize_scene(const Scene& scene) {
    json root;
    root["camera"] = {{"position", vec3_json(scene.camera.position)},
                      {"look_at", vec3_json(scene.camera.look_at)},
                      {"up", vec3_json(scene.camera.up)},
                      {"fov_degrees", scene.camera.vfov_degrees}};
    json materials = json::array();
    for (const Material& m : scene.materials) {
        json jm = {{"name", m.name}, {"albedo", spectrum_json(m.albedo)}};
        if (m.emissive()) jm["emission"] = spectrum_json(m.emission);
        if (m.glossy()) jm["phong_exponent"] = m.phong_exponent;
        materials.push_back(jm);
    }
    root["materials"] = materials;

    json prims = json::array();
    for (const Primitive& p : scene.primitives) {
        json jp;
        jp["material"] = scene.materials[p.material_id].name;
        switch (p.kind) {
            case Primitive::Kind::Sphere:
                jp["type"] = "sphere";
                jp["center"] = vec3_json(p.p0);
                jp["radius"] = p.radius;
                break;
            case Primitive::Kind::Quad:
                jp["type"] = "quad";
                jp["corner"] = vec3_json(p.p0);
                jp["edge_u"] = vec3_json(p.e1);
                jp["edge_v"] = vec3_json(p.e2);
                break;
            case Primitive::Kind::Triangle:
                jp["type"] = "triangle";
                jp["vertices"] = json::array({vec3_json(p.p0), vec3_json(p.p1), vec3_json(p.p2)});
                break;
        }
        prims.push_back(jp);
    }
    root["primitives"] = prims;

    if (scene.environment) {
        if (scene.environment->is_constant()) {
            root["environment"] = {{"constant", spectrum_json(scene.environment->constant_value())}};
        } else {
            json texels = json::array();
            for (const Spectrum& t : scene.environment->texels()) texels.push_back(spectrum_json(t));
            root["environment"] = {{"lattice",
                                    {{"width", scene.environment->width()},
                                     {"height", scene.environment->height()},
                                     {"texels", texels}}}};
        }
    }
    return root.dump(2);
}

void apply_preset(RenderConfig& config, const std::string& preset_json) {
    json p = json::parse(preset_json);
    if (p.contains("width")) config.width = p["width"].get<int>();
    if (p.contains("height")) config.height = p["height"].get<int>();
    if (p.contains("iterations")) config.iterations = p["iterations"].get<int>();
    if (p.contains("spp")) config.iterations = p["spp"].get<int>();
    if (p.contains("max_depth")) config.max_depth = p["max_depth"].get<int>();
    if (p.contains("mode")) config.mode = parse_mode(p["mode"].get<std::string>());
    if (p.contains("alpha")) config.alpha = AlphaSchedule::parse(p["alpha"].get<std::string>());
    if (p.contains("probes")) config.probe_count = p["probes"].get<int>();
    if (p.contains("bands")) config.bands = p["bands"].get<int>();
    if (p.contains("sectors")) config.sectors = p["sectors"].get<int>();
    if (p.contains("floor")) config.floor_scale = p["floor"].get<double>();
    if (p.contains("seed")) config.seed = p["seed"].get<uint64_t>();
    if (p.contains("threads")) config.threads = p["threads"].get<int>();
    if (p.contains("env_samples")) config.env_samples = p["env_samples"].get<int>();
    if (p.contains("grid")) {
        const json& g = p["grid"];
        config.grid_nx = g.at(0).get<int>();
        config.grid_ny = g.at(1).get<int>();
        config.grid_nz = g.at(2).get<int>();
    }
}

}  // namespace rlpt
