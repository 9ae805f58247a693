// Copyright 2026 The rlpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "rlpt/distribution.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rlpt {

DiscreteDistribution DiscreteDistribution::build(std::span<const double> weights,
                                                 double floor_value) {
    if (weights.empty())
        throw std::invalid_argument("DiscreteDistribution: empty weight list");
    if (!(floor_value > 0) || !std::isfinite(floor_value))
        throw std::invalid_argument("DiscreteDistribution: floor must be positive");

    DiscreteDistribution d;
    d.floor_ = floor_value;
    d.weights_.resize(weights.size());
    for (size_t i = 0; i < weights.size(); ++i) {
        double w = weights[i];
        if (!std::isfinite(w) || w < 0)
            throw std::invalid_argument("DiscreteDistribution: weight " + std::to_string(i) +
                                        " is negative or not finite");
        d.weights_[i] = std::max(w, floor_value);
    }

    d.total_ = 0;
    for (double w : d.weights_) d.total_ += w;

    d.cdf_.resize(d.weights_.size());
    double acc = 0;
    for (size_t i = 0; i < d.weights_.size(); ++i) {
        acc += d.weights_[i];
        d.cdf_[i] = acc / d.total_;
    }
    d.cdf_.back() = 1.0;
    return d;
}

DiscreteDistribution::Sample DiscreteDistribution::sample(double u) const {
    if (!(u >= 0.0 && u < 1.0))
        throw std::out_of_range("DiscreteDistribution::sample: u outside [0,1)");
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    int index = static_cast<int>(std::min<size_t>(it - cdf_.begin(), cdf_.size() - 1));
    return {index, weights_[index] / total_};
}

}  // namespace rlpt
