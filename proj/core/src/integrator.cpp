// Copyright 2026 The rlpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "rlpt/integrator.h"

#include <atomic>
#include <chrono>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace rlpt {

namespace {

// Emission pickup rules per mode: paths always terminate when they reach an
// emitter or the environment, but modes that estimate the corresponding
// lighting explicitly only credit the primary hit.
bool area_pickup_allowed(Mode mode, int depth) {
    if (mode == Mode::NeeTd || mode == Mode::RlNeeTd) return depth == 0;
    return true;
}

bool env_pickup_allowed(Mode mode, int depth) {
    if (mode == Mode::EnvRl) return depth == 0;
    return true;
}

}  // namespace

Mode parse_mode(const std::string& name) {
    if (name == "bsdf") return Mode::Bsdf;
    if (name == "rl") return Mode::Rl;
    if (name == "rl_max") return Mode::RlMax;
    if (name == "nee_td") return Mode::NeeTd;
    if (name == "rl_nee_td") return Mode::RlNeeTd;
    if (name == "env_rl") return Mode::EnvRl;
    throw std::invalid_argument("unknown mode '" + name + "'");
}

const char* mode_name(Mode mode) {
    switch (mode) {
        case Mode::Bsdf: return "bsdf";
        case Mode::Rl: return "rl";
        case Mode::RlMax: return "rl_max";
        case Mode::NeeTd: return "nee_td";
        case Mode::RlNeeTd: return "rl_nee_td";
        case Mode::EnvRl: return "env_rl";
    }
    return "?";
}

double RenderStats::nonzero_fraction_from(int first) const {
    uint64_t paths = 0, nonzero = 0;
    for (const IterationStats& it : iterations) {
        if (it.iteration < first) continue;
        paths += it.paths;
        nonzero += it.nonzero_paths;
    }
    return paths ? static_cast<double>(nonzero) / paths : 0.0;
}

double RenderStats::avg_path_length_from(int first) const {
    uint64_t paths = 0;
    double sum = 0;
    for (const IterationStats& it : iterations) {
        if (it.iteration < first) continue;
        paths += it.paths;
        sum += it.avg_path_length * it.paths;
    }
    return paths ? sum / paths : 0.0;
}

void write_stats_csv(std::ostream& out, const RenderConfig& config, const RenderStats& stats) {
    out << "# width=" << config.width << " height=" << config.height
        << " iterations=" << config.iterations << " max_depth=" << config.max_depth
        << " rr_depth=" << config.rr_depth << " mode=" << mode_name(config.mode)
        << " alpha=" << config.alpha.to_string() << " probes=" << config.probe_count
        << " strata=" << config.bands << "x" << config.sectors << " grid=" << config.grid_nx
        << "," << config.grid_ny << "," << config.grid_nz << " env_tiles=" << config.env_tiles_cos
        << "x" << config.env_tiles_phi << " floor=" << config.floor_scale
        << " normal_cos_min=" << config.normal_cos_min << " seed=" << config.seed
        << " threads=" << config.threads << " deterministic=" << (config.deterministic ? 1 : 0)
        << " learn=" << (config.learn ? 1 : 0) << " env_samples=" << config.env_samples << "\n";
    out << "# paths_total=" << stats.paths_total << " paths_nonzero=" << stats.paths_nonzero
        << " nonzero_fraction=" << stats.nonzero_fraction()
        << " avg_path_length=" << stats.avg_path_length() << " q_updates=" << stats.q_updates
        << " lookup_failures=" << stats.lookup_failures << " nan_paths=" << stats.nan_paths
        << "\n";
    out << "iteration,paths,nonzero_paths,avg_path_length,ms_elapsed\n";
    for (const IterationStats& it : stats.iterations)
        out << it.iteration << ',' << it.paths << ',' << it.nonzero_paths << ','
            << it.avg_path_length << ',' << it.ms_elapsed << '\n';
}

GuidingState GuidingState::create(const Scene& scene, const RenderConfig& config) {
    GuidingState state;
    if (mode_uses_qfield(config.mode)) {
        QField::Options options;
        options.policy = config.mode == Mode::RlMax ? GuidingPolicy::QMax
                                                    : GuidingPolicy::ExpectedSarsa;
        options.sampling =
            config.sampling_override.value_or(GuidingSampling::ProportionalQBsdfCos);
        options.alpha = config.alpha;
        options.normal_cos_min = config.normal_cos_min;
        options.floor_scale = config.floor_scale;
        state.qfield = QField::place_probes(
            scene, config.probe_count, HemisphereGrid{config.bands, config.sectors}, options);
    }
    if (mode_uses_light_grid(config.mode)) {
        state.light_grid = LightSelectionGrid(
            scene.bounds(), config.grid_nx, config.grid_ny, config.grid_nz,
            static_cast<int>(scene.lights().size()), config.alpha, config.floor_scale);
    }
    if (mode_uses_env_grid(config.mode) && scene.environment) {
        state.env_grid =
            EnvTileGrid(scene.bounds(), config.grid_nx, config.grid_ny, config.grid_nz,
                        config.env_tiles_phi, config.env_tiles_cos, *scene.environment,
                        config.alpha, config.floor_scale);
    }
    return state;
}

Spectrum next_event(const Scene& scene, LightSelectionGrid& grid, const Vec3& x,
                    const Frame& frame, const Material& material, const Vec3& wo,
                    RngStream& rng, bool learn) {
    int cell = grid.cell_of(x);
    auto [light_index, p_select] = grid.select_light(cell, rng.next());
    const AreaLight& light = scene.lights()[light_index];
    LightPoint lp =
        light_sample(light, scene.primitives[light.primitive_id], rng.next(), rng.next());

    Vec3 d = lp.point - x;
    double r2 = length_squared(d);
    Spectrum contribution(0.0);
    if (r2 > 0) {
        Vec3 dir = d / std::sqrt(r2);
        double cos_x = dot(frame.normal, dir);
        double cos_l = dot(lp.normal, -dir);
        if (cos_x > 0 && cos_l > 0 &&
            !scene.occluded(scene.offset_point(x, frame.normal), lp.point)) {
            Spectrum f = bsdf_eval(material, dir, wo, frame);
            contribution = light.emission * f * (cos_x * cos_l / (r2 * lp.pdf_area));
        }
    }
    if (learn) grid.update_value(cell, light_index, contribution);
    return contribution / p_select;
}

Spectrum next_event_env(const Scene& scene, EnvTileGrid& grid, const Vec3& x,
                        const Frame& frame, const Material& material, const Vec3& wo,
                        RngStream& rng, bool learn, int samples) {
    int cell = grid.cell_of(x);
    Spectrum acc(0.0);
    for (int s = 0; s < samples; ++s) {
        auto [tile, p_select] = grid.select_tile(cell, rng.next());
        DirectionSample d = grid.sample_dir_in_tile(tile, rng.next(), rng.next());
        double cos_x = dot(frame.normal, d.dir);
        Spectrum contribution(0.0);
        if (cos_x > 0 &&
            !scene.occluded_toward(scene.offset_point(x, frame.normal), d.dir)) {
            Spectrum f = bsdf_eval(material, d.dir, wo, frame);
            contribution = scene.environment->radiance(d.dir) * f * (cos_x / d.pdf);
        }
        if (learn) grid.update_value(cell, tile, contribution);
        acc += contribution / p_select;
    }
    return acc / samples;
}

PathResult trace_path(const Scene& scene, const RenderConfig& config, GuidingState* state,
                      const Ray& camera_ray, RngStream& rng, PathCounters& counters) {
    const bool guided = mode_uses_qfield(config.mode) && state && state->qfield;
    const bool nee = mode_uses_light_grid(config.mode) && state && state->light_grid &&
                     state->light_grid->light_count() > 0;
    const bool env_nee = mode_uses_env_grid(config.mode) && state && state->env_grid &&
                         scene.environment.has_value();

    Spectrum throughput(1.0);
    Spectrum result(0.0);
    Ray ray = camera_ray;
    int length = 0;

    int prev_probe = -1;
    Frame prev_frame;

    for (int depth = 0; depth < config.max_depth; ++depth) {
        Hit hit = scene.intersect(ray);
        ++length;

        const Material* material = nullptr;
        Frame frame;
        int probe_here = -1;
        if (hit.is_surface()) {
            material = &scene.material_of(hit);
            frame = Frame::from_normal(faceforward(hit.normal, -ray.dir));
            if (guided) probe_here = state->qfield->lookup(hit.point, frame.normal);
        }

        if (guided && depth > 0 && config.learn)
            state->qfield->update_cached(scene, prev_probe, prev_frame, ray.dir, hit,
                                         probe_here, rng);

        if (!hit.is_surface()) {
            if (hit.is_environment() && env_pickup_allowed(config.mode, depth))
                result += throughput * scene.environment->radiance(ray.dir);
            break;
        }

        if (material->emissive()) {
            if (area_pickup_allowed(config.mode, depth))
                result += throughput * emitted(*material, -ray.dir, hit.normal);
            break;  // per the tracing loop, paths end at light sources
        }

        if (nee)
            result += throughput * next_event(scene, *state->light_grid, hit.point, frame,
                                              *material, -ray.dir, rng, config.learn);
        if (env_nee)
            result += throughput * next_event_env(scene, *state->env_grid, hit.point, frame,
                                                  *material, -ray.dir, rng, config.learn,
                                                  config.env_samples);

        Vec3 wi;
        double pdf;
        Spectrum f;
        if (guided && probe_here >= 0) {
            DirectionSample d = state->qfield->sample_direction(probe_here, frame, rng.next(),
                                                                rng.next(), rng.next());
            wi = d.dir;
            pdf = d.pdf;
            f = bsdf_eval(*material, wi, -ray.dir, frame);
        } else {
            if (guided) ++counters.q_fallbacks;
            BsdfSample s = bsdf_sample(*material, -ray.dir, frame, rng.next(), rng.next());
            wi = s.wi;
            pdf = s.pdf;
            f = s.f;
        }
        if (pdf <= 0 || f.is_black()) break;

        throughput *= f * (dot(frame.normal, wi) / pdf);

        if (depth >= config.rr_depth) {
            double p_survive = std::min(1.0, throughput.max_component());
            if (rng.next() >= p_survive) break;
            throughput /= p_survive;
        }

        prev_probe = probe_here;
        prev_frame = frame;
        ray.origin = scene.offset_point(hit.point, frame.normal);
        ray.dir = wi;
        ray.t_min = 0;
        ray.t_max = kInfinity;
    }

    PathResult out;
    if (!result.is_finite()) {
        result = Spectrum(0.0);
        ++counters.nan_paths;
    }
    out.radiance = result;
    out.length = length;
    out.nonzero = !result.is_black();
    counters.sum_length += length;
    if (out.nonzero) ++counters.nonzero;
    return out;
}

RenderResult render(const Scene& scene, const RenderConfig& config, GuidingState* state) {
    RenderResult out;
    out.image = Image(config.width, config.height);
    if (config.width <= 0 || config.height <= 0)
        throw std::invalid_argument("render: image dimensions must be positive");

    GuidingState owned;
    if (!state) {
        owned = GuidingState::create(scene, config);
        state = &owned;
    }

    const int pixel_count = config.pixel_count();
    if (config.track_variance) {
        out.luminance_mean.assign(pixel_count, 0.0);
        out.luminance_var_of_mean.assign(pixel_count, 0.0);
    }
    std::vector<double> m2(config.track_variance ? pixel_count : 0, 0.0);

    int thread_count = config.deterministic
                           ? 1
                           : (config.threads > 0
                                  ? config.threads
                                  : std::max(1u, std::thread::hardware_concurrency()));

    for (int iter = 0; iter < config.iterations; ++iter) {
        auto t0 = std::chrono::steady_clock::now();
        std::atomic<int> next_row{0};
        std::vector<PathCounters> counters(thread_count);

        auto worker = [&](int tid) {
            PathCounters& local = counters[tid];
            for (;;) {
                int y = next_row.fetch_add(1, std::memory_order_relaxed);
                if (y >= config.height) break;
                for (int x = 0; x < config.width; ++x) {
                    int pix = y * config.width + x;
                    RngStream rng = RngStream::for_pixel(config.seed, pix, iter);
                    double jx = rng.next(), jy = rng.next();
                    Ray ray = scene.camera.generate_ray(x, y, config.width, config.height, jx,
                                                        jy);
                    PathResult res = trace_path(scene, config, state, ray, rng, local);

                    Spectrum& mean = out.image.pixels[pix];
                    double n = iter + 1;
                    mean += (res.radiance - mean) / n;
                    if (config.track_variance) {
                        double lum = luminance(res.radiance);
                        double delta = lum - out.luminance_mean[pix];
                        out.luminance_mean[pix] += delta / n;
                        m2[pix] += delta * (lum - out.luminance_mean[pix]);
                    }
                }
            }
        };

        if (thread_count == 1) {
            worker(0);
        } else {
            std::vector<std::thread> pool;
            pool.reserve(thread_count);
            for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker, t);
            for (std::thread& t : pool) t.join();
        }

        if (config.learn) {
            if (state->qfield) state->qfield->rebuild_distributions();
            if (state->light_grid) state->light_grid->rebuild();
            if (state->env_grid) state->env_grid->rebuild();
        }

        IterationStats row;
        row.iteration = iter;
        row.paths = pixel_count;
        uint64_t sum_length = 0;
        for (const PathCounters& c : counters) {
            row.nonzero_paths += c.nonzero;
            sum_length += c.sum_length;
            out.stats.nan_paths += c.nan_paths;
            out.stats.lookup_failures += c.q_fallbacks;
        }
        row.avg_path_length = static_cast<double>(sum_length) / pixel_count;
        row.ms_elapsed = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
        out.stats.iterations.push_back(row);
        out.stats.paths_total += row.paths;
        out.stats.paths_nonzero += row.nonzero_paths;
        out.stats.sum_path_length += sum_length;
    }

    if (state->qfield) {
        out.stats.q_updates = state->qfield->updates_applied();
        out.stats.lookup_failures += state->qfield->updates_skipped();
    }
    if (config.track_variance && config.iterations > 1) {
        double n = config.iterations;
        for (int i = 0; i < pixel_count; ++i)
            out.luminance_var_of_mean[i] = m2[i] / (n - 1) / n;
    }
    return out;
}

}  // namespace rlpt
