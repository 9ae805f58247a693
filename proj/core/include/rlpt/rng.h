// Copyright 2026 The rlpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace rlpt {

// PCG32 (O'Neill 2014) seeded through splitmix64. Streams are keyed by
// (seed, pixel, iteration) so that every pixel/iteration pair draws an
// independent, reproducible sequence regardless of thread scheduling.
class RngStream {
public:
    RngStream() : RngStream(0x853c49e6748fea9bULL) {}

    explicit RngStream(uint64_t seed, uint64_t sequence = 1) {
        state_ = 0;
        inc_ = (sequence << 1u) | 1u;
        next_u32();
        state_ += splitmix64(seed);
        next_u32();
    }

    static RngStream for_pixel(uint64_t seed, uint64_t pixel, uint64_t iteration) {
        uint64_t key = splitmix64(seed ^ (pixel * 0x9e3779b97f4a7c15ULL) ^
                                  (iteration * 0xbf58476d1ce4e5b9ULL));
        return RngStream(key, pixel * 2 + 1);
    }

    uint32_t next_u32() {
        uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        uint32_t xorshifted = static_cast<uint32_t>(((old >> 18u) ^ old) >> 27u);
        uint32_t rot = static_cast<uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
    }

    // Uniform double in [0, 1).
    double next() {
        return next_u32() * 0x1p-32;
    }

private:
    static uint64_t splitmix64(uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    uint64_t state_;
    uint64_t inc_;
};

}  // namespace rlpt
