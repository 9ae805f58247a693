// Copyright 2026 The rlpt Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <sstream>
#include <vector>

#include "rlpt/guiding.h"
#include "rlpt/sampling.h"

#include "test_util.h"

using namespace rlpt;

TEST_SUITE_BEGIN("guiding");

namespace {

const Frame kUp = Frame::from_normal({0, 1, 0});

Scene one_quad_scene(double albedo = 0.5) {
    Scene s;
    Material m;
    m.name = "m";
    m.albedo = Spectrum(albedo);
    s.materials.push_back(m);
    // Edge order puts the normal at +y.
    s.primitives.push_back(Primitive::quad({0, 0, 0}, {0, 0, 1}, {1, 0, 0}, 0));
    s.build();
    return s;
}

QField::Options sarsa_options(GuidingSampling sampling = GuidingSampling::ProportionalQ) {
    QField::Options o;
    o.policy = GuidingPolicy::ExpectedSarsa;
    o.sampling = sampling;
    o.alpha = AlphaSchedule::per_visit();
    return o;
}

}  // namespace

TEST_CASE("place_probes on a single quad") {
    Scene s = one_quad_scene();
    HemisphereGrid grid{4, 8};
    QField f = QField::place_probes(s, 4, grid, sarsa_options());
    REQUIRE(f.probe_count() == 4);
    for (int p = 0; p < 4; ++p) {
        const Vec3& pos = f.probe_position(p);
        CHECK(pos.x >= 0);
        CHECK(pos.x <= 1);
        CHECK(pos.y == 0);
        CHECK(pos.z >= 0);
        CHECK(pos.z <= 1);
        CHECK(f.probe_normal(p).y == doctest::Approx(1.0));
        for (int k = 0; k < grid.stratum_count(); ++k) CHECK(f.q(p, k) == 1.0);
    }
}

TEST_CASE("place_probes splits by area") {
    Scene s;
    Material m;
    m.name = "m";
    s.materials.push_back(m);
    s.primitives.push_back(Primitive::quad({0, 0, 0}, {0, 0, 1}, {1, 0, 0}, 0));    // area 1
    s.primitives.push_back(Primitive::quad({5, 0, 0}, {0, 0, 1}, {3, 0, 0}, 0));    // area 3
    s.build();
    QField f = QField::place_probes(s, 256, HemisphereGrid{2, 4}, sarsa_options());
    int on_small = 0;
    for (int p = 0; p < f.probe_count(); ++p)
        if (f.probe_position(p).x <= 1.0) ++on_small;
    // The stratified first coordinate makes the 1:3 split essentially exact.
    CHECK(on_small == 64);
}

TEST_CASE("place_probes count one") {
    Scene s = one_quad_scene();
    QField f = QField::place_probes(s, 1, HemisphereGrid{2, 4}, sarsa_options());
    REQUIRE(f.probe_count() == 1);
    CHECK(f.lookup({7, 3, -2}, {0, 1, 0}) == 0);
    CHECK_THROWS_AS(QField::place_probes(s, 0, HemisphereGrid{2, 4}, sarsa_options()),
                    std::invalid_argument);
}

TEST_CASE("lookup nearest with normal filter and tie break") {
    Scene s = one_quad_scene();
    QField f = QField::place_probes(s, 2, HemisphereGrid{2, 4}, sarsa_options());
    // Probe positions from the low-discrepancy set; overwrite via a custom
    // scene instead: probes at x=0 (i=0) and x=0.5 (i=1) on the quad.
    REQUIRE(f.probe_count() == 2);
    Vec3 p0 = f.probe_position(0), p1 = f.probe_position(1);

    int near_p0 = f.lookup(p0, {0, 1, 0});
    CHECK(near_p0 == 0);
    int near_p1 = f.lookup(p1, {0, 1, 0});
    CHECK(near_p1 == 1);

    // Wrong-facing query normal finds nothing.
    CHECK(f.lookup(p0, {0, -1, 0}) == -1);

    // Equidistant query: lower index wins.
    Vec3 mid = (p0 + p1) * 0.5;
    CHECK(f.lookup(mid, {0, 1, 0}) == 0);
}

TEST_CASE("stratum_of maps the normal to the top band deterministically") {
    HemisphereGrid grid{8, 16};
    int k = grid.stratum_of(kUp, kUp.normal);
    CHECK(k == 16 * 7);  // sector 0 of the top band
}

TEST_CASE("stratum round trip") {
    HemisphereGrid grid{8, 16};
    RngStream rng(3);
    for (int k = 0; k < grid.stratum_count(); ++k)
        for (int trial = 0; trial < 20; ++trial) {
            DirectionSample d = grid.sample_in_stratum(kUp, k, rng.next(), rng.next());
            CHECK(grid.stratum_of(kUp, d.dir) == k);
            CHECK(d.pdf == doctest::Approx(grid.stratum_count() / kTwoPi));
        }
    CHECK_THROWS_AS(grid.sample_in_stratum(kUp, grid.stratum_count(), 0.1, 0.1),
                    std::out_of_range);
    CHECK(grid.stratum_of(kUp, {0, -1, 0}) == -1);
}

TEST_CASE("cosine-sampled directions cover all strata") {
    HemisphereGrid grid{8, 8};
    RngStream rng(5);
    std::vector<int> counts(grid.stratum_count(), 0);
    for (int i = 0; i < 100'000; ++i) {
        auto s = cosine_sample_hemisphere(rng.next(), rng.next());
        int k = grid.stratum_of(kUp, kUp.to_world(s.dir));
        REQUIRE(k >= 0);
        ++counts[k];
    }
    for (int k = 0; k < grid.stratum_count(); ++k) CHECK(counts[k] > 0);
}

TEST_CASE("degenerate one-stratum grid is uniform hemisphere sampling") {
    HemisphereGrid grid{1, 1};
    RngStream rng(7);
    double mean_cos = 0;
    const int n = 100'000;
    for (int i = 0; i < n; ++i) {
        DirectionSample d = grid.sample_in_stratum(kUp, 0, rng.next(), rng.next());
        CHECK(d.pdf == doctest::Approx(1.0 / kTwoPi));
        mean_cos += dot(d.dir, kUp.normal);
    }
    CHECK(mean_cos / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("top band mean cosine matches the band integral") {
    HemisphereGrid grid{2, 4};
    RngStream rng(9);
    double mean = 0;
    const int n = 100'000;
    for (int i = 0; i < n; ++i) {
        int k = grid.sectors + static_cast<int>(rng.next() * grid.sectors);  // top band
        DirectionSample d = grid.sample_in_stratum(kUp, k, rng.next(), rng.next());
        mean += dot(d.dir, kUp.normal);
    }
    // cos uniform on [0.5, 1] has mean 0.75.
    CHECK(mean / n == doctest::Approx(0.75).epsilon(0.01));
}

TEST_CASE("estimate_incident expectation is rho times the constant value") {
    Scene s = one_quad_scene();
    HemisphereGrid grid{8, 16};
    QField f = QField::place_probes(s, 1, grid, sarsa_options());
    const double c = 2.5, rho = 0.6;
    for (int k = 0; k < grid.stratum_count(); ++k) f.set_q(0, k, c);
    Material m;
    m.albedo = Spectrum(rho);

    RngStream rng(11);
    const int trials = 100'000;
    double sum = 0;
    for (int i = 0; i < trials; ++i)
        sum += f.estimate_incident(0, kUp.normal, m, kUp, rng);
    double mean = sum / trials;

    // Brute-force oracle: uniform-hemisphere MC of the same integral.
    RngStream orng(12);
    double oracle = 0;
    for (int i = 0; i < trials; ++i) {
        Vec3 d = uniform_hemisphere_dir(orng.next(), orng.next());
        oracle += kTwoPi * c * (rho * kInvPi) * d.z;
    }
    oracle /= trials;

    CHECK(oracle == doctest::Approx(rho * c).epsilon(0.01));
    CHECK(mean == doctest::Approx(rho * c).epsilon(0.01));
}

TEST_CASE("estimate_incident of a zero field is zero") {
    Scene s = one_quad_scene();
    HemisphereGrid grid{4, 8};
    QField f = QField::place_probes(s, 1, grid, sarsa_options());
    for (int k = 0; k < grid.stratum_count(); ++k) f.set_q(0, k, 0.0);
    Material m;
    m.albedo = Spectrum(0.9);
    RngStream rng(13);
    CHECK(f.estimate_incident(0, kUp.normal, m, kUp, rng) == 0.0);
}

TEST_CASE("single grazing stratum is bounded by its band cosine") {
    Scene s = one_quad_scene();
    HemisphereGrid grid{8, 16};
    QField f = QField::place_probes(s, 1, grid, sarsa_options());
    for (int k = 0; k < grid.stratum_count(); ++k) f.set_q(0, k, 0.0);
    f.set_q(0, 3, 1.0);  // band 0 (cos in [0, 1/8)), some sector
    Material m;
    m.albedo = Spectrum(1.0);
    RngStream rng(17);
    const double bound = kTwoPi / grid.stratum_count() * 1.0 * kInvPi * (1.0 / 8);
    double sum = 0;
    const int trials = 20'000;
    for (int i = 0; i < trials; ++i) {
        double e = f.estimate_incident(0, kUp.normal, m, kUp, rng);
        CHECK(e >= 0);
        CHECK(e <= bound * (1 + 1e-12));
        sum += e;
    }
    // Expectation: (2 pi / n) (rho/pi) E[cos | band 0] = bound / 2.
    CHECK(sum / trials == doctest::Approx(bound * 0.5).epsilon(0.02));
}

TEST_CASE("update with a pure emissive target") {
    // x on a floor quad, omega straight up into an emissive ceiling quad
    // with unit luminance; per-visit alpha starts at 1, so Q goes 0 -> 1.
    Scene s;
    Material floor_mat;
    floor_mat.name = "floor";
    floor_mat.albedo = Spectrum(0.5);
    s.materials.push_back(floor_mat);
    Material lamp;
    lamp.name = "lamp";
    lamp.emission = Spectrum(1.0);  // luminance 1
    s.materials.push_back(lamp);
    s.primitives.push_back(Primitive::quad({-2, 0, -2}, {0, 0, 4}, {4, 0, 0}, 0));  // faces +y
    s.primitives.push_back(Primitive::quad({-2, 2, -2}, {4, 0, 0}, {0, 0, 4}, 1));  // faces -y
    s.build();

    QField f = QField::place_probes(s, 64, HemisphereGrid{4, 8}, sarsa_options());
    for (int p = 0; p < f.probe_count(); ++p)
        for (int k = 0; k < 32; ++k) f.set_q(p, k, 0.0);

    Vec3 x{0.1, 0, 0.1};
    Vec3 omega{0, 1, 0};
    Ray ray{x + Vec3(0, 1e-5, 0), omega};
    Hit y = s.intersect(ray);
    REQUIRE(y.is_surface());
    REQUIRE(s.material_of(y).emissive());

    RngStream rng(19);
    auto updated = f.update(s, x, {0, 1, 0}, omega, y, rng);
    REQUIRE(updated.has_value());
    CHECK(*updated == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("update convex combination arithmetic") {
    // alpha = 0.5 constant: (1-0.5)*2 + 0.5*1 = 1.5, exact.
    Scene s = one_quad_scene();
    QField g = QField::place_probes(s, 1, HemisphereGrid{2, 4}, [] {
        auto o = sarsa_options();
        o.alpha = AlphaSchedule::constant_rate(0.5);
        return o;
    }());
    g.set_q(0, 0, 2.0);
    double v = g.apply_update(0, 0, 1.0);
    CHECK(v == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(g.q(0, 0) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("per-visit schedule is an exact running mean") {
    Scene s = one_quad_scene();
    QField f = QField::place_probes(s, 1, HemisphereGrid{2, 4}, sarsa_options());
    f.set_q(0, 5, 0.0);

    // visits 0,1,2,3 -> alpha 1, 1/2, 1/3, 1/4.
    std::vector<double> targets{4.0, 2.0, 6.0, 0.0};
    std::vector<double> expected{4.0, 3.0, 4.0, 3.0};
    for (size_t i = 0; i < targets.size(); ++i) {
        double v = f.apply_update(0, 5, targets[i]);
        CHECK(v == expected[i]);
        CHECK(f.visits(0, 5) == i + 1);
    }

    // A constant target is reproduced exactly, forever.
    f.set_q(0, 6, 0.0);
    const double t = 0.7371;
    for (int i = 0; i < 1000; ++i) CHECK(f.apply_update(0, 6, t) == t);
}

TEST_CASE("rebuild: uniform values give the uniform cdf") {
    Scene s = one_quad_scene();
    HemisphereGrid grid{4, 8};
    QField f = QField::place_probes(s, 1, grid, sarsa_options(GuidingSampling::ProportionalQ));
    f.rebuild_distributions();
    const DiscreteDistribution& d = f.distribution(0);
    for (int k = 0; k < d.size(); ++k)
        CHECK(d.probability(k) == doctest::Approx(1.0 / grid.stratum_count()).epsilon(1e-12));
}

TEST_CASE("rebuild: one-hot value keeps floored mass elsewhere") {
    Scene s = one_quad_scene();
    HemisphereGrid grid{4, 8};
    const int n = grid.stratum_count();
    QField f = QField::place_probes(s, 1, grid, sarsa_options(GuidingSampling::ProportionalQ));
    for (int k = 0; k < n; ++k) f.set_q(0, k, 0.0);
    f.set_q(0, n - 1, 1.0);
    f.rebuild_distributions();
    const DiscreteDistribution& d = f.distribution(0);
    double floor = 1e-4 * (1.0 / n);
    CHECK(d.probability(n - 1) == doctest::Approx(1.0 / (1.0 + (n - 1) * floor)).epsilon(1e-9));
    for (int k = 0; k < n - 1; ++k) CHECK(d.probability(k) > 0);
}

TEST_CASE("rebuild with bsdf-cosine weighting is proportional to the stratum cosine") {
    Scene s = one_quad_scene(0.8);
    HemisphereGrid grid{4, 8};
    QField f =
        QField::place_probes(s, 1, grid, sarsa_options(GuidingSampling::ProportionalQBsdfCos));
    f.rebuild_distributions();
    const DiscreteDistribution& d = f.distribution(0);
    double scale = d.probability(0) / grid.stratum_center_cos(0);
    for (int k = 0; k < d.size(); ++k)
        CHECK(d.probability(k) ==
              doctest::Approx(scale * grid.stratum_center_cos(k)).epsilon(1e-9));
}

TEST_CASE("sample_direction pdf: uniform field") {
    Scene s = one_quad_scene();
    QField f =
        QField::place_probes(s, 1, HemisphereGrid{8, 16}, sarsa_options(GuidingSampling::ProportionalQ));
    RngStream rng(23);
    for (int i = 0; i < 1000; ++i) {
        DirectionSample d = f.sample_direction(0, kUp, rng.next(), rng.next(), rng.next());
        CHECK(d.pdf == doctest::Approx(1.0 / kTwoPi).epsilon(1e-12));
        CHECK(f.pdf_direction(0, kUp, d.dir) == doctest::Approx(d.pdf).epsilon(1e-12));
    }
    CHECK(f.pdf_direction(0, kUp, {0, -1, 0}) == 0.0);
}

TEST_CASE("sample_direction pdf: concentrated field") {
    Scene s = one_quad_scene();
    HemisphereGrid grid{8, 16};
    const int n = grid.stratum_count();
    QField f = QField::place_probes(s, 1, grid, sarsa_options(GuidingSampling::ProportionalQ));
    for (int k = 0; k < n; ++k) f.set_q(0, k, 0.0);
    f.set_q(0, 42, 1.0);
    f.rebuild_distributions();
    double p42 = f.distribution(0).probability(42);
    RngStream rng(29);
    DirectionSample d = grid.sample_in_stratum(kUp, 42, rng.next(), rng.next());
    CHECK(f.pdf_direction(0, kUp, d.dir) == doctest::Approx(p42 * n / kTwoPi).epsilon(1e-12));
}

TEST_CASE("guided sampling stays unbiased after arbitrary updates") {
    Scene s = one_quad_scene();
    HemisphereGrid grid{8, 16};
    QField f = QField::place_probes(s, 1, grid, sarsa_options(GuidingSampling::ProportionalQ));
    RngStream rng(31);
    for (int i = 0; i < 5000; ++i)
        f.apply_update(0, static_cast<int>(rng.next() * grid.stratum_count()),
                       10.0 * rng.next() * rng.next());
    f.rebuild_distributions();

    // MC of integral cos dw with the learned pdf must still give pi.
    const int trials = 1'000'000;
    double sum = 0;
    for (int i = 0; i < trials; ++i) {
        DirectionSample d = f.sample_direction(0, kUp, rng.next(), rng.next(), rng.next());
        sum += dot(d.dir, kUp.normal) / d.pdf;
    }
    CHECK(sum / trials == doctest::Approx(kPi).epsilon(0.01));
}

TEST_CASE("sampled histogram matches pdf_direction per stratum") {
    Scene s = one_quad_scene();
    HemisphereGrid grid{4, 8};
    const int n = grid.stratum_count();
    QField f = QField::place_probes(s, 1, grid, sarsa_options(GuidingSampling::ProportionalQ));
    RngStream rng(37);
    for (int i = 0; i < 2000; ++i)
        f.apply_update(0, static_cast<int>(rng.next() * n), 5.0 * rng.next());
    f.rebuild_distributions();

    const int trials = 300'000;
    std::vector<int> counts(n, 0);
    for (int i = 0; i < trials; ++i) {
        DirectionSample d = f.sample_direction(0, kUp, rng.next(), rng.next(), rng.next());
        ++counts[grid.stratum_of(kUp, d.dir)];
    }
    double chi2 = 0;
    for (int k = 0; k < n; ++k) {
        double e = f.distribution(0).probability(k) * trials;
        REQUIRE(e > 0);
        if (e < 5) continue;
        chi2 += (counts[k] - e) * (counts[k] - e) / e;
    }
    CHECK(chi2 < n + 4.5 * std::sqrt(2.0 * n) + 6.0);
}

TEST_CASE("values stay finite and nonnegative under random updates") {
    Scene s = one_quad_scene();
    HemisphereGrid grid{4, 8};
    QField f = QField::place_probes(s, 4, grid, [] {
        auto o = sarsa_options();
        o.alpha = AlphaSchedule::constant_rate(1.0);
        return o;
    }());
    RngStream rng(41);
    for (int i = 0; i < 50'000; ++i) {
        int p = static_cast<int>(rng.next() * 4);
        int k = static_cast<int>(rng.next() * grid.stratum_count());
        f.apply_update(p, k, 100.0 * rng.next());
    }
    for (int p = 0; p < 4; ++p)
        for (int k = 0; k < grid.stratum_count(); ++k) {
            CHECK(f.q(p, k) >= 0);
            CHECK(std::isfinite(f.q(p, k)));
        }
    f.rebuild_distributions();
    CHECK(f.min_floor_share_ratio() >= 1.0 - 1e-9);
}

TEST_CASE("self-referential recursion reaches the analytic fixed point") {
    // A probe whose update target is L + (its own transported estimate):
    // the scalar recursion q <- mean(L + rho q) has fixed point L/(1-rho).
    const double kEnv = 1.0, kRho = 0.5;
    Scene s = one_quad_scene(kRho);
    HemisphereGrid grid{4, 8};
    const int n = grid.stratum_count();
    QField f = QField::place_probes(s, 1, grid, sarsa_options());
    Material m;
    m.albedo = Spectrum(kRho);

    RngStream rng(43);
    for (int step = 0; step < 40'000; ++step) {
        double target = kEnv + f.estimate_incident(0, kUp.normal, m, kUp, rng);
        int k = static_cast<int>(rng.next() * n);
        f.apply_update(0, k, target);
    }
    const double fixed_point = kEnv / (1.0 - kRho);
    for (int k = 0; k < n; ++k)
        CHECK(f.q(0, k) == doctest::Approx(fixed_point).epsilon(0.03));

    // Brute-force simulation of the same recursion, independent of QField.
    RngStream brng(47);
    std::vector<double> q(n, 1.0);
    std::vector<uint32_t> visits(n, 0);
    const int bands = grid.bands, sectors = grid.sectors;
    for (int step = 0; step < 40'000; ++step) {
        double estimate = 0;
        for (int k = 0; k < n; ++k) {
            double cos_k = (k / sectors + brng.next()) / bands;
            estimate += q[k] * (kRho * kInvPi) * cos_k;
        }
        estimate *= kTwoPi / n;
        double target = kEnv + estimate;
        int k = static_cast<int>(brng.next() * n);
        double alpha = 1.0 / (1.0 + visits[k]++);
        q[k] += alpha * (target - q[k]);
    }
    for (int k = 0; k < n; ++k) CHECK(q[k] == doctest::Approx(fixed_point).epsilon(0.03));
}

TEST_CASE("max update target uses the best stratum at centers") {
    Scene s = one_quad_scene();
    HemisphereGrid grid{4, 8};
    QField f = QField::place_probes(s, 1, grid, [] {
        auto o = sarsa_options();
        o.policy = GuidingPolicy::QMax;
        return o;
    }());
    const int n = grid.stratum_count();
    for (int k = 0; k < n; ++k) f.set_q(0, k, 0.0);
    f.set_q(0, n - 1, 3.0);  // top band
    Material m;
    m.albedo = Spectrum(0.5);
    double expected = kTwoPi * 3.0 * (0.5 * kInvPi) * grid.stratum_center_cos(n - 1);
    CHECK(f.max_incident_target(0, kUp.normal, m, kUp) ==
          doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("probe dump has one line per probe with n values") {
    Scene s = one_quad_scene();
    HemisphereGrid grid{2, 4};
    QField f = QField::place_probes(s, 3, grid, sarsa_options());
    std::ostringstream out;
    f.dump_probes(out);
    std::istringstream in(out.str());
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        double x;
        int tokens = 0;
        while (ls >> x) ++tokens;
        CHECK(tokens == 6 + grid.stratum_count());
        ++lines;
    }
    CHECK(lines == 3);
}

TEST_SUITE_END();
