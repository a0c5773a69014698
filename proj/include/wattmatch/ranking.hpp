// Copyright 2026 The WattMatch Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WATTMATCH_RANKING_HPP
#define WATTMATCH_RANKING_HPP

#include <cstdint>
#include <vector>

#include "wattmatch/matrix.hpp"

namespace wattmatch {

struct RankedFeatures {
  std::vector<double> weights;        // one per feature, in [-1, 1]
  std::vector<std::size_t> order;     // descending weight; ties by ascending index
};

/// Multiclass ReliefF. `data` holds one instance per row; `labels` one class
/// per instance (>= 2 distinct classes, each with at least k_neighbors + 1
/// members). Features are min-max scaled over the dataset internally.
/// sample_count == 0 (or == instance count) sweeps every instance in order,
/// which makes the result independent of the seed; smaller counts sample
/// without replacement from the seeded stream.
RankedFeatures relieff(const Matrix& data, const std::vector<int>& labels, int k_neighbors,
                       std::size_t sample_count, std::uint64_t seed);

/// Elementwise mean of per-signal weight vectors, re-sorted.
RankedFeatures average_rankings(const std::vector<std::vector<double>>& per_signal);

/// Descending-weight order with ties broken by ascending feature index.
std::vector<std::size_t> rank_order(const std::vector<double>& weights);

}  // namespace wattmatch

#endif
