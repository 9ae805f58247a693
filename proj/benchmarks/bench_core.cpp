// Copyright 2026 The rlpt Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <vector>

#include "rlpt/distribution.h"
#include "rlpt/rng.h"
#include "rlpt/sampling.h"

using namespace rlpt;

static void BM_DistributionBuild(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    RngStream rng(1);
    std::vector<double> w(n);
    for (double& x : w) x = rng.next();
    for (auto _ : state) {
        auto d = DiscreteDistribution::build(w, 1e-6);
        benchmark::DoNotOptimize(d.total());
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_DistributionBuild)->Arg(128)->Arg(4096);

static void BM_DistributionSample(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    RngStream rng(2);
    std::vector<double> w(n);
    for (double& x : w) x = rng.next();
    auto d = DiscreteDistribution::build(w, 1e-6);
    for (auto _ : state) {
        auto s = d.sample(rng.next());
        benchmark::DoNotOptimize(s.index);
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_DistributionSample)->Arg(128)->Arg(4096);

static void BM_CosineSampleHemisphere(benchmark::State& state) {
    RngStream rng(3);
    for (auto _ : state) {
        auto s = cosine_sample_hemisphere(rng.next(), rng.next());
        benchmark::DoNotOptimize(s.dir.z);
    }
}
BENCHMARK(BM_CosineSampleHemisphere);

static void BM_RadicalInverse(benchmark::State& state) {
    uint32_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(radical_inverse_base2(i++));
}
BENCHMARK(BM_RadicalInverse);

BENCHMARK_MAIN();
