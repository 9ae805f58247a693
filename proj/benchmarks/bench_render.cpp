// Copyright 2026 The rlpt Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "rlpt/guiding.h"
#include "rlpt/integrator.h"

using namespace rlpt;

namespace {

Scene furnace_scene() {
    Scene s;
    Material m;
    m.name = "shell";
    m.albedo = Spectrum(1.0);
    s.materials.push_back(m);
    s.primitives.push_back(Primitive::sphere({0, 0, 0}, 0.5, 0));
    s.environment = EnvironmentLight::constant(Spectrum(1.0));
    s.camera.position = {0, 0, -2.5};
    s.camera.look_at = {0, 0, 0};
    s.camera.vfov_degrees = 30;
    s.build();
    return s;
}

Scene box_scene() {
    Scene s;
    Material wall;
    wall.name = "wall";
    wall.albedo = Spectrum(0.75);
    s.materials.push_back(wall);
    Material lamp;
    lamp.name = "lamp";
    lamp.emission = Spectrum(10.0);
    s.materials.push_back(lamp);
    auto quad = [&](Vec3 c, Vec3 u, Vec3 v, int m2) {
        s.primitives.push_back(Primitive::quad(c, u, v, m2));
    };
    quad({0, 0, 0}, {0, 0, 2}, {2, 0, 0}, 0);
    quad({0, 2, 0}, {2, 0, 0}, {0, 0, 2}, 0);
    quad({0, 0, 0}, {2, 0, 0}, {0, 2, 0}, 0);
    quad({0, 0, 2}, {0, 2, 0}, {2, 0, 0}, 0);
    quad({0, 0, 0}, {0, 2, 0}, {0, 0, 2}, 0);
    quad({2, 0, 0}, {0, 0, 2}, {0, 2, 0}, 0);
    quad({0.7, 1.98, 0.7}, {0.6, 0, 0}, {0, 0, 0.6}, 1);
    s.camera.position = {1, 1, 0.2};
    s.camera.look_at = {1, 1, 2};
    s.build();
    return s;
}

void render_iteration(benchmark::State& state, Mode mode) {
    Scene scene = box_scene();
    RenderConfig cfg;
    cfg.width = 64;
    cfg.height = 64;
    cfg.iterations = 1;
    cfg.mode = mode;
    cfg.probe_count = 512;
    cfg.threads = 1;
    GuidingState gs = GuidingState::create(scene, cfg);
    uint64_t seed = 1;
    for (auto _ : state) {
        cfg.seed = seed++;
        RenderResult out = render(scene, cfg, &gs);
        benchmark::DoNotOptimize(out.stats.paths_total);
    }
    state.SetItemsProcessed(state.iterations() * cfg.pixel_count());
}

}  // namespace

static void BM_RenderIterationBsdf(benchmark::State& state) {
    render_iteration(state, Mode::Bsdf);
}
BENCHMARK(BM_RenderIterationBsdf)->Unit(benchmark::kMillisecond);

static void BM_RenderIterationRl(benchmark::State& state) { render_iteration(state, Mode::Rl); }
BENCHMARK(BM_RenderIterationRl)->Unit(benchmark::kMillisecond);

static void BM_RenderIterationNee(benchmark::State& state) {
    render_iteration(state, Mode::NeeTd);
}
BENCHMARK(BM_RenderIterationNee)->Unit(benchmark::kMillisecond);

static void BM_FurnaceBaseline(benchmark::State& state) {
    Scene scene = furnace_scene();
    RenderConfig cfg;
    cfg.width = 64;
    cfg.height = 64;
    cfg.iterations = 4;
    cfg.threads = 1;
    uint64_t seed = 1;
    for (auto _ : state) {
        cfg.seed = seed++;
        RenderResult out = render(scene, cfg);
        benchmark::DoNotOptimize(out.stats.paths_total);
    }
    state.SetItemsProcessed(state.iterations() * cfg.pixel_count() * cfg.iterations);
}
BENCHMARK(BM_FurnaceBaseline)->Unit(benchmark::kMillisecond);

static void BM_QFieldUpdateSample(benchmark::State& state) {
    Scene scene = box_scene();
    QField::Options opts;
    QField f = QField::place_probes(scene, 512, HemisphereGrid{8, 16}, opts);
    RngStream rng(7);
    Frame up = Frame::from_normal({0, 1, 0});
    Material m;
    m.albedo = Spectrum(0.75);
    for (auto _ : state) {
        int probe = f.lookup({2 * rng.next(), 0, 2 * rng.next()}, {0, 1, 0});
        double target = 1.0 + f.estimate_incident(probe, up.normal, m, up, rng);
        f.apply_update(probe, static_cast<int>(rng.next() * 128), target);
        DirectionSample d = f.sample_direction(probe, up, rng.next(), rng.next(), rng.next());
        benchmark::DoNotOptimize(d.pdf);
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_QFieldUpdateSample);

BENCHMARK_MAIN();
