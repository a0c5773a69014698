// Copyright 2026 The WattMatch Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WATTMATCH_MATCHING_HPP
#define WATTMATCH_MATCHING_HPP

#include <string>

#include "wattmatch/matrix.hpp"

namespace wattmatch {

enum class Metric { euclidean, manhattan, kl };
enum class Algorithm { dtw, sdtw, gak, mvm };

Metric metric_from_name(const std::string& name);
Algorithm algorithm_from_name(const std::string& name);
const char* metric_name(Metric m);
const char* algorithm_name(Algorithm a);

struct MatchParams {
  double gamma = 5.0;     // sDTW / GAK smoothing, >= 0 (GAK needs > 0)
  int elasticity_v = 10;  // MVM link-width bound, >= 1
  Metric metric = Metric::euclidean;

  void validate() const;
};

enum class ScoreKind { distance, similarity };

struct MatchScore {
  double value = 0.0;
  ScoreKind kind = ScoreKind::distance;
};

/// Pairwise column costs between two F-row sequences (K and L columns).
struct CostMatrix {
  Matrix values;  // K x L
  Metric metric = Metric::euclidean;
};

/// Column-to-column distance; the F-dimensional difference is reduced by the
/// metric. KL requires strictly positive entries and throws DomainError
/// otherwise.
double point_cost(const Matrix& a, std::size_t col_a, const Matrix& b, std::size_t col_b,
                  Metric metric);

CostMatrix cost_matrix(const Matrix& a, const Matrix& b, Metric metric);

/// Classic dynamic time warping: minimum alignment cost with step set
/// {(1,0),(0,1),(1,1)}, endpoints anchored at both corners.
MatchScore dtw(const Matrix& a, const Matrix& b, Metric metric = Metric::euclidean);

/// Soft-minimum relaxation of dtw; gamma = 0 reproduces dtw bit-exactly and
/// gamma > 0 smooths over all alignments (result may be negative).
MatchScore sdtw(const Matrix& a, const Matrix& b, double gamma, Metric metric = Metric::euclidean);

/// Global alignment kernel: sum of exp(-cost/gamma) over all alignments.
/// Computed in the log domain; gak() returns the similarity itself, log_gak()
/// the logarithm (finite even where the similarity under- or overflows).
MatchScore gak(const Matrix& a, const Matrix& b, double gamma, Metric metric = Metric::euclidean);
double log_gak(const Matrix& a, const Matrix& b, double gamma, Metric metric = Metric::euclidean);

/// Minimal variance matching: aligns the whole query (K columns) to a
/// strictly increasing subsequence of the target (L >= K columns). Every
/// link advances the query by one and the target by 1..min(1 + L - K,
/// elasticity_v); the first query element may land within that same width.
MatchScore mvm(const Matrix& query, const Matrix& target, int elasticity_v,
               Metric metric = Metric::euclidean);

/// Distance-semantics comparator used by the identification argmin: dtw,
/// sdtw and mvm scores pass through, GAK similarities map to -log k.
double match_distance(Algorithm algorithm, const Matrix& a, const Matrix& b,
                      const MatchParams& params);

/// Exhaustive enumeration over alignments / index maps, for testing the DP
/// implementations. Guarded to K, L <= 8; larger inputs throw ArgumentError.
MatchScore brute_force_oracle(Algorithm kind, const Matrix& a, const Matrix& b,
                              const MatchParams& params);

}  // namespace wattmatch

#endif
