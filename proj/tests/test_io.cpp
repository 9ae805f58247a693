// Copyright 2026 The rlpt Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "rlpt/image_io.h"
#include "rlpt/scene_io.h"

#include "test_util.h"

using namespace rlpt;

TEST_SUITE_BEGIN("io");

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

const char* kMinimalScene = R"({
  "camera": {"position": [0,1,-3], "look_at": [0,1,0], "fov_degrees": 50},
  "materials": [{"name": "white", "albedo": [0.75, 0.75, 0.75]}],
  "primitives": [
    {"type": "quad", "corner": [-1,0,-1], "edge_u": [2,0,0], "edge_v": [0,0,2], "material": "white"}
  ]
})";

}  // namespace

TEST_CASE("minimal scene parses with no lights") {
    SceneFile f = parse_scene_text(kMinimalScene, "minimal");
    CHECK(f.scene.primitives.size() == 1);
    CHECK(f.scene.lights().empty());
    CHECK(f.scene.camera.vfov_degrees == 50);
}

TEST_CASE("emissive primitives derive area lights") {
    const char* text = R"({
      "camera": {"position": [0,1,-3], "look_at": [0,1,0]},
      "materials": [
        {"name": "white", "albedo": [0.7,0.7,0.7]},
        {"name": "lamp", "albedo": [0,0,0], "emission": [1,1,1]}
      ],
      "primitives": [
        {"type": "quad", "corner": [-1,0,-1], "edge_u": [2,0,0], "edge_v": [0,0,2], "material": "white"},
        {"type": "quad", "corner": [-0.2,2,-0.2], "edge_u": [0.4,0,0], "edge_v": [0,0,0.4], "material": "lamp"}
      ]
    })";
    Scene s = parse_scene_text(text, "lights").scene;
    REQUIRE(s.lights().size() == 1);
    CHECK(s.lights()[0].primitive_id == 1);
    CHECK(s.lights()[0].emission == Spectrum(1, 1, 1));
    CHECK(s.lights()[0].area == doctest::Approx(0.16));
    CHECK(s.light_of_primitive(1) == 0);
    CHECK(s.light_of_primitive(0) == -1);
}

TEST_CASE("dangling material reference names the culprit") {
    const char* text = R"({
      "camera": {"position": [0,0,-1], "look_at": [0,0,0]},
      "materials": [],
      "primitives": [{"type": "sphere", "center": [0,0,0], "radius": 1, "material": "ghost"}]
    })";
    try {
        parse_scene_text(text, "bad");
        FAIL("expected SceneError");
    } catch (const SceneError& e) {
        CHECK(std::string(e.what()).find("ghost") != std::string::npos);
    }
}

TEST_CASE("parse errors report line and column") {
    const char* text = "{\n  \"camera\": [,]\n}";
    try {
        parse_scene_text(text, "syntax");
        FAIL("expected SceneError");
    } catch (const SceneError& e) {
        std::string msg = e.what();
        CHECK(msg.find("line 2") != std::string::npos);
        CHECK(msg.find("column") != std::string::npos);
    }
}

TEST_CASE("degenerate primitives are fatal") {
    const char* text = R"({
      "camera": {"position": [0,0,-1], "look_at": [0,0,0]},
      "materials": [{"name": "m", "albedo": [0.5,0.5,0.5]}],
      "primitives": [{"type": "quad", "corner": [0,0,0], "edge_u": [1,0,0], "edge_v": [2,0,0], "material": "m"}]
    })";
    CHECK_THROWS_AS(parse_scene_text(text, "degenerate"), SceneError);

    const char* bad_albedo = R"({
      "camera": {"position": [0,0,-1], "look_at": [0,0,0]},
      "materials": [{"name": "m", "albedo": [1.5,0.5,0.5]}],
      "primitives": [{"type": "sphere", "center": [0,0,0], "radius": 1, "material": "m"}]
    })";
    CHECK_THROWS_AS(parse_scene_text(bad_albedo, "albedo"), SceneError);
}

TEST_CASE("scene round trip is equivalent") {
    const char* text = R"({
      "camera": {"position": [1,2,-3], "look_at": [0,1,0], "up": [0,1,0], "fov_degrees": 35},
      "materials": [
        {"name": "white", "albedo": [0.7,0.6,0.5]},
        {"name": "lamp", "albedo": [0,0,0], "emission": [4,5,6]},
        {"name": "shiny", "albedo": [0.9,0.9,0.9], "phong_exponent": 32}
      ],
      "primitives": [
        {"type": "quad", "corner": [-1,0,-1], "edge_u": [2,0,0], "edge_v": [0,0,2], "material": "white"},
        {"type": "sphere", "center": [0.25,0.5,0], "radius": 0.375, "material": "shiny"},
        {"type": "triangle", "vertices": [[0,0,0],[1,0,0],[0,1,0]], "material": "lamp"}
      ],
      "environment": {"lattice": {"width": 2, "height": 2,
        "texels": [[1,0,0],[0,1,0],[0,0,1],[0.5,0.5,0.5]]}},
      "presets": {"fast": {"spp": 4, "mode": "rl"}}
    })";
    SceneFile f = parse_scene_text(text, "round");
    CHECK(f.presets.count("fast") == 1);

    std::string serialized = serialize_scene(f.scene);
    Scene again = parse_scene_text(serialized, "round2").scene;

    REQUIRE(again.primitives.size() == f.scene.primitives.size());
    REQUIRE(again.materials.size() == f.scene.materials.size());
    for (size_t i = 0; i < again.primitives.size(); ++i) {
        CHECK(again.primitives[i].kind == f.scene.primitives[i].kind);
        CHECK(again.primitives[i].area() == doctest::Approx(f.scene.primitives[i].area()));
    }
    for (size_t i = 0; i < again.materials.size(); ++i) {
        CHECK(again.materials[i].albedo == f.scene.materials[i].albedo);
        CHECK(again.materials[i].emission == f.scene.materials[i].emission);
        CHECK(again.materials[i].phong_exponent == f.scene.materials[i].phong_exponent);
    }
    CHECK(again.lights().size() == f.scene.lights().size());
    REQUIRE(again.environment.has_value());
    CHECK(again.environment->width() == 2);
    CHECK(again.environment->radiance({0, 1, 0}) == f.scene.environment->radiance({0, 1, 0}));
    CHECK(again.camera.position == f.scene.camera.position);
    CHECK(again.camera.vfov_degrees == f.scene.camera.vfov_degrees);
}

TEST_CASE("presets overlay render configuration") {
    SceneFile f = parse_scene_text(R"({
      "camera": {"position": [0,0,-1], "look_at": [0,0,0]},
      "materials": [{"name": "m", "albedo": [0.5,0.5,0.5]}],
      "primitives": [{"type": "sphere", "center": [0,0,0], "radius": 0.5, "material": "m"}],
      "presets": {"quick": {"spp": 3, "mode": "nee_td", "probes": 77, "grid": [4,5,6],
                             "alpha": "const:0.25"}}
    })",
                                   "presets");
    RenderConfig cfg;
    apply_preset(cfg, f.presets.at("quick"));
    CHECK(cfg.iterations == 3);
    CHECK(cfg.mode == Mode::NeeTd);
    CHECK(cfg.probe_count == 77);
    CHECK(cfg.grid_nx == 4);
    CHECK(cfg.grid_ny == 5);
    CHECK(cfg.grid_nz == 6);
    CHECK(cfg.alpha.kind == AlphaSchedule::Kind::Constant);
    CHECK(cfg.alpha.constant == 0.25);
}

TEST_CASE("pfm payload of a black 1x1 image is three zero floats") {
    Image img(1, 1);
    auto path = temp_file("rlpt_black.pfm");
    write_image(img, path.string(), ImageFormat::Pfm);

    std::ifstream in(path, std::ios::binary);
    std::string header;
    std::getline(in, header);
    CHECK(header == "PF");
    std::getline(in, header);
    CHECK(header == "1 1");
    std::getline(in, header);
    CHECK(header == "-1.0");
    float payload[3] = {1, 1, 1};
    in.read(reinterpret_cast<char*>(payload), sizeof(payload));
    CHECK(in.gcount() == sizeof(payload));
    CHECK(payload[0] == 0.0f);
    CHECK(payload[1] == 0.0f);
    CHECK(payload[2] == 0.0f);
    std::remove(path.string().c_str());
}

TEST_CASE("pfm round trip is bit exact") {
    RngStream rng(3);
    Image img(7, 5);
    for (Spectrum& p : img.pixels)
        p = Spectrum(float(10 * rng.next()), float(-rng.next()), float(1000 * rng.next()));
    auto path = temp_file("rlpt_roundtrip.pfm");
    write_image(img, path.string(), ImageFormat::Pfm);
    Image back = read_pfm(path.string());
    REQUIRE(back.width == 7);
    REQUIRE(back.height == 5);
    for (size_t i = 0; i < img.pixels.size(); ++i) {
        CHECK(static_cast<float>(img.pixels[i].r) == static_cast<float>(back.pixels[i].r));
        CHECK(static_cast<float>(img.pixels[i].g) == static_cast<float>(back.pixels[i].g));
        CHECK(static_cast<float>(img.pixels[i].b) == static_cast<float>(back.pixels[i].b));
    }
    std::remove(path.string().c_str());
}

TEST_CASE("ppm gamma and clamping") {
    Image img(2, 1);
    img.at(0, 0) = Spectrum(1.0, 2.0, 0.0);  // clamps to 1 -> 255
    img.at(1, 0) = Spectrum(0.5, 0.5, 0.5);
    auto path = temp_file("rlpt_gamma.ppm");
    write_image(img, path.string(), ImageFormat::Ppm);

    std::ifstream in(path, std::ios::binary);
    std::string line;
    std::getline(in, line);
    CHECK(line == "P6");
    std::getline(in, line);
    CHECK(line == "2 1");
    std::getline(in, line);
    CHECK(line == "255");
    unsigned char bytes[6];
    in.read(reinterpret_cast<char*>(bytes), 6);
    CHECK(bytes[0] == 255);
    CHECK(bytes[1] == 255);
    CHECK(bytes[2] == 0);
    int expected = static_cast<int>(std::floor(std::pow(0.5, 1.0 / 2.2) * 255.0 + 0.5));
    CHECK(bytes[3] == expected);
    std::remove(path.string().c_str());
}

TEST_SUITE_END();
