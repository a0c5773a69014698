// Copyright 2026 The WattMatch Authors
// SPDX-License-Identifier: Apache-2.0

// Brute-force reference scores. None of this shares code with the DP
// implementations in matching.cpp: alignments and index maps are enumerated
// explicitly and costs accumulated along each candidate, in the same forward
// order the DPs use so that minima agree bit-exactly.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "wattmatch/matching.hpp"

namespace wattmatch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kEnumerationGuard = 8;

// All monotone alignment paths from (0,0) to (K-1,L-1) with steps
// {(1,0),(0,1),(1,1)}; calls emit with each path's accumulated cost.
void walk_alignments(const Matrix& a, const Matrix& b, Metric metric, std::size_t i,
                     std::size_t j, double acc, const std::function<void(double)>& emit) {
  const std::size_t k_len = a.cols(), l_len = b.cols();
  if (i + 1 == k_len && j + 1 == l_len) {
    emit(acc);
    return;
  }
  if (i + 1 < k_len)
    walk_alignments(a, b, metric, i + 1, j, acc + point_cost(a, i + 1, b, j, metric), emit);
  if (j + 1 < l_len)
    walk_alignments(a, b, metric, i, j + 1, acc + point_cost(a, i, b, j + 1, metric), emit);
  if (i + 1 < k_len && j + 1 < l_len)
    walk_alignments(a, b, metric, i + 1, j + 1, acc + point_cost(a, i + 1, b, j + 1, metric),
                    emit);
}

void for_each_alignment_cost(const Matrix& a, const Matrix& b, Metric metric,
                             const std::function<void(double)>& emit) {
  walk_alignments(a, b, metric, 0, 0, point_cost(a, 0, b, 0, metric), emit);
}

// Strictly increasing index maps under the mvm width bound, cost accumulated
// in query order.
void walk_maps(const Matrix& q, const Matrix& t, Metric metric, std::size_t width, std::size_t k,
               std::size_t prev_l, bool first, double acc,
               const std::function<void(double)>& emit) {
  const std::size_t k_len = q.cols(), l_len = t.cols();
  if (k == k_len) {
    emit(acc);
    return;
  }
  std::size_t lo = first ? 0 : prev_l + 1;
  std::size_t hi = first ? width : prev_l + width + 1;  // exclusive
  for (std::size_t l = lo; l < hi && l < l_len; ++l)
    walk_maps(q, t, metric, width, k + 1, l, false, acc + point_cost(q, k, t, l, metric), emit);
}

void check_guard(const Matrix& a, const Matrix& b) {
  if (a.empty() || b.empty()) throw ArgumentError("oracle inputs must be non-empty");
  if (a.rows() != b.rows()) throw ArgumentError("oracle inputs must have the same feature count");
  if (a.cols() > kEnumerationGuard || b.cols() > kEnumerationGuard)
    throw ArgumentError("oracle refuses sequences longer than 8");
}

}  // namespace

MatchScore brute_force_oracle(Algorithm kind, const Matrix& a, const Matrix& b,
                              const MatchParams& params) {
  check_guard(a, b);
  params.validate();

  switch (kind) {
    case Algorithm::dtw: {
      double best = kInf;
      for_each_alignment_cost(a, b, params.metric, [&](double c) { best = std::min(best, c); });
      return {best, ScoreKind::distance};
    }
    case Algorithm::sdtw: {
      if (params.gamma == 0.0) return brute_force_oracle(Algorithm::dtw, a, b, params);
      std::vector<double> costs;
      for_each_alignment_cost(a, b, params.metric, [&](double c) { costs.push_back(c); });
      double m = *std::min_element(costs.begin(), costs.end());
      double acc = 0.0;
      for (double c : costs) acc += std::exp(-(c - m) / params.gamma);
      return {m - params.gamma * std::log(acc), ScoreKind::distance};
    }
    case Algorithm::gak: {
      if (!(params.gamma > 0.0)) throw ArgumentError("gak oracle needs gamma > 0");
      double acc = 0.0;
      for_each_alignment_cost(a, b, params.metric,
                              [&](double c) { acc += std::exp(-c / params.gamma); });
      return {acc, ScoreKind::similarity};
    }
    case Algorithm::mvm: {
      const std::size_t k_len = a.cols(), l_len = b.cols();
      if (k_len > l_len) throw ArgumentError("mvm query must not be longer than the target");
      std::size_t width = std::min<std::size_t>(1 + (l_len - k_len),
                                                static_cast<std::size_t>(params.elasticity_v));
      double best = kInf;
      walk_maps(a, b, params.metric, width, 0, 0, true, 0.0,
                [&](double c) { best = std::min(best, c); });
      return {best, ScoreKind::distance};
    }
  }
  throw ArgumentError("unknown oracle kind");
}

}  // namespace wattmatch
