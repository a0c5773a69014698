// Copyright 2026 The WattMatch Authors
// SPDX-License-Identifier: Apache-2.0

#include "wattmatch/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "wattmatch/rng.hpp"

namespace wattmatch {

std::vector<std::size_t> rank_order(const std::vector<double>& weights) {
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (weights[a] != weights[b]) return weights[a] > weights[b];
    return a < b;
  });
  return order;
}

RankedFeatures relieff(const Matrix& data, const std::vector<int>& labels, int k_neighbors,
                       std::size_t sample_count, std::uint64_t seed) {
  const std::size_t n = data.rows();
  const std::size_t f = data.cols();
  if (n == 0 || f == 0) throw ArgumentError("relieff needs a non-empty dataset");
  if (labels.size() != n) throw ArgumentError("label count does not match instance count");
  if (k_neighbors < 1) throw ArgumentError("k_neighbors must be >= 1");

  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t idx = 0; idx < n; ++idx) by_class[labels[idx]].push_back(idx);
  if (by_class.size() < 2) throw ArgumentError("relieff needs at least two classes");
  for (const auto& [cls, members] : by_class)
    if (members.size() < static_cast<std::size_t>(k_neighbors) + 1)
      throw ArgumentError("class " + std::to_string(cls) + " has fewer than k+1 instances");

  // Min-max scaling per feature over this dataset; constant features scale
  // to zero diffs.
  std::vector<double> lo(f), hi(f), span(f);
  for (std::size_t j = 0; j < f; ++j) {
    lo[j] = hi[j] = data.at(0, j);
    for (std::size_t idx = 1; idx < n; ++idx) {
      lo[j] = std::min(lo[j], data.at(idx, j));
      hi[j] = std::max(hi[j], data.at(idx, j));
    }
    span[j] = hi[j] - lo[j];
    if (span[j] <= 0.0) span[j] = 1.0;  // makes every diff of the feature 0
  }
  auto diff = [&](std::size_t j, std::size_t a, std::size_t b) {
    return std::abs(data.at(a, j) - data.at(b, j)) / span[j];
  };
  auto distance = [&](std::size_t a, std::size_t b) {
    double acc = 0.0;
    for (std::size_t j = 0; j < f; ++j) acc += diff(j, a, b);
    return acc;
  };

  std::map<int, double> prior;
  for (const auto& [cls, members] : by_class)
    prior[cls] = static_cast<double>(members.size()) / static_cast<double>(n);

  // Sampled instance set: the deterministic full sweep by default.
  std::vector<std::size_t> sampled;
  if (sample_count == 0 || sample_count >= n) {
    sampled.resize(n);
    std::iota(sampled.begin(), sampled.end(), 0);
  } else {
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    auto rng = rng_stream(seed, stream::kRanking);
    std::shuffle(pool.begin(), pool.end(), rng);
    sampled.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(sample_count));
    std::sort(sampled.begin(), sampled.end());
  }
  const double m = static_cast<double>(sampled.size());
  const double k = static_cast<double>(k_neighbors);

  std::vector<double> weights(f, 0.0);
  std::vector<std::pair<double, std::size_t>> scratch;
  for (std::size_t r : sampled) {
    for (const auto& [cls, members] : by_class) {
      scratch.clear();
      for (std::size_t idx : members) {
        if (idx == r) continue;
        scratch.emplace_back(distance(r, idx), idx);
      }
      std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k_neighbors), scratch.size());
      std::partial_sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(take),
                        scratch.end());
      const bool hit = (cls == labels[r]);
      // Prior-weighted miss contribution, standard multiclass update.
      const double scale = hit ? -1.0 / (m * k) : prior.at(cls) / (1.0 - prior.at(labels[r])) / (m * k);
      for (std::size_t t = 0; t < take; ++t)
        for (std::size_t j = 0; j < f; ++j) weights[j] += scale * diff(j, r, scratch[t].second);
    }
  }

  RankedFeatures out;
  out.weights = std::move(weights);
  out.order = rank_order(out.weights);
  return out;
}

RankedFeatures average_rankings(const std::vector<std::vector<double>>& per_signal) {
  if (per_signal.empty()) throw ArgumentError("average_rankings needs at least one vector");
  const std::size_t f = per_signal.front().size();
  for (const auto& w : per_signal)
    if (w.size() != f) throw ArgumentError("weight vectors have unequal lengths");

  RankedFeatures out;
  out.weights.assign(f, 0.0);
  for (const auto& w : per_signal)
    for (std::size_t j = 0; j < f; ++j) out.weights[j] += w[j];
  for (double& x : out.weights) x /= static_cast<double>(per_signal.size());
  out.order = rank_order(out.weights);
  return out;
}

}  // namespace wattmatch
