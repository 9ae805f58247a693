// Copyright 2026 The rlpt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

namespace rlpt {

// Discrete distribution sampled by CDF inversion (binary search). Weights
// below the floor are replaced by the floor before normalization, so every
// bin keeps a strictly positive probability: any action that was possible
// stays possible no matter what the learned weights collapse to.
class DiscreteDistribution {
public:
    DiscreteDistribution() = default;

    // Throws std::invalid_argument on an empty weight list, a negative or
    // non-finite weight, or a non-positive floor. An all-zero weight list
    // yields the uniform distribution.
    static DiscreteDistribution build(std::span<const double> weights, double floor_value);

    struct Sample {
        int index;
        double probability;
    };

    // Returns the smallest index whose CDF entry exceeds u. u must lie in
    // [0, 1); anything else throws std::out_of_range.
    Sample sample(double u) const;

    double probability(int index) const { return weights_[index] / total_; }
    // Smallest probability any bin can have, i.e. floor / total.
    double floor_share() const { return floor_ / total_; }
    double floor_value() const { return floor_; }
    double total() const { return total_; }
    int size() const { return static_cast<int>(weights_.size()); }
    bool empty() const { return weights_.empty(); }

    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& cdf() const { return cdf_; }

private:
    std::vector<double> weights_;  // post-floor
    std::vector<double> cdf_;      // nondecreasing, last entry 1
    double total_ = 0;
    double floor_ = 0;
};

}  // namespace rlpt
