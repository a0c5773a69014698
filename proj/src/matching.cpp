// Copyright 2026 The WattMatch Authors
// SPDX-License-Identifier: Apache-2.0

#include "wattmatch/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace wattmatch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double metric_1d(double x, double y, Metric metric) {
  switch (metric) {
    case Metric::euclidean:
    case Metric::manhattan:
      return std::abs(x - y);
    case Metric::kl:
      if (!(x > 0.0) || !(y > 0.0)) throw DomainError("KL distance needs strictly positive values");
      return x * std::log(x / y);
  }
  return 0.0;
}

// Soft minimum of already finite-or-inf cell values, max-shifted for
// stability. gamma > 0.
inline double soft_min3(double a, double b, double c, double gamma) {
  double m = std::min(a, std::min(b, c));
  if (m == kInf) return kInf;
  double acc = std::exp(-(a - m) / gamma) + std::exp(-(b - m) / gamma) + std::exp(-(c - m) / gamma);
  return m - gamma * std::log(acc);
}

inline double log_sum_exp3(double a, double b, double c) {
  double m = std::max(a, std::max(b, c));
  if (m == -kInf) return -kInf;
  return m + std::log(std::exp(a - m) + std::exp(b - m) + std::exp(c - m));
}

void check_nonempty(const Matrix& a, const Matrix& b) {
  if (a.empty() || b.empty()) throw ArgumentError("matching inputs must be non-empty");
  if (a.rows() != b.rows()) throw ArgumentError("matching inputs must have the same feature count");
}

}  // namespace

Metric metric_from_name(const std::string& name) {
  if (name == "euclidean") return Metric::euclidean;
  if (name == "manhattan") return Metric::manhattan;
  if (name == "kl") return Metric::kl;
  throw ArgumentError("unknown metric: " + name);
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "dtw") return Algorithm::dtw;
  if (name == "sdtw") return Algorithm::sdtw;
  if (name == "gak") return Algorithm::gak;
  if (name == "mvm") return Algorithm::mvm;
  throw ArgumentError("unknown algorithm: " + name);
}

const char* metric_name(Metric m) {
  switch (m) {
    case Metric::euclidean: return "euclidean";
    case Metric::manhattan: return "manhattan";
    case Metric::kl: return "kl";
  }
  return "?";
}

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::dtw: return "dtw";
    case Algorithm::sdtw: return "sdtw";
    case Algorithm::gak: return "gak";
    case Algorithm::mvm: return "mvm";
  }
  return "?";
}

void MatchParams::validate() const {
  if (!(gamma >= 0.0)) throw ArgumentError("gamma must be >= 0");
  if (elasticity_v < 1) throw ArgumentError("elasticity_v must be >= 1");
}

double point_cost(const Matrix& a, std::size_t col_a, const Matrix& b, std::size_t col_b,
                  Metric metric) {
  const std::size_t f = a.rows();
  if (f == 1) return metric_1d(a.at(0, col_a), b.at(0, col_b), metric);
  switch (metric) {
    case Metric::euclidean: {
      double acc = 0.0;
      for (std::size_t r = 0; r < f; ++r) {
        double d = a.at(r, col_a) - b.at(r, col_b);
        acc += d * d;
      }
      return std::sqrt(acc);
    }
    case Metric::manhattan: {
      double acc = 0.0;
      for (std::size_t r = 0; r < f; ++r) acc += std::abs(a.at(r, col_a) - b.at(r, col_b));
      return acc;
    }
    case Metric::kl: {
      double acc = 0.0;
      for (std::size_t r = 0; r < f; ++r) acc += metric_1d(a.at(r, col_a), b.at(r, col_b), metric);
      return acc;
    }
  }
  return 0.0;
}

CostMatrix cost_matrix(const Matrix& a, const Matrix& b, Metric metric) {
  check_nonempty(a, b);
  CostMatrix out;
  out.metric = metric;
  out.values = Matrix(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.cols(); ++k)
    for (std::size_t l = 0; l < b.cols(); ++l) out.values.at(k, l) = point_cost(a, k, b, l, metric);
  return out;
}

MatchScore dtw(const Matrix& a, const Matrix& b, Metric metric) {
  check_nonempty(a, b);
  const std::size_t k_len = a.cols(), l_len = b.cols();

  // Two-row DP over the (K+1) x (L+1) grid; row 0 / column 0 are the
  // anchoring border.
  std::vector<double> prev(l_len + 1, kInf), cur(l_len + 1, kInf);
  prev[0] = 0.0;
  for (std::size_t i = 1; i <= k_len; ++i) {
    cur[0] = kInf;
    for (std::size_t j = 1; j <= l_len; ++j) {
      double c = point_cost(a, i - 1, b, j - 1, metric);
      cur[j] = c + std::min(prev[j - 1], std::min(prev[j], cur[j - 1]));
    }
    std::swap(prev, cur);
  }
  return {prev[l_len], ScoreKind::distance};
}

MatchScore sdtw(const Matrix& a, const Matrix& b, double gamma, Metric metric) {
  if (!(gamma >= 0.0)) throw ArgumentError("gamma must be >= 0");
  if (gamma == 0.0) return dtw(a, b, metric);  // the hard-minimum case, bit-exact
  check_nonempty(a, b);
  const std::size_t k_len = a.cols(), l_len = b.cols();

  std::vector<double> prev(l_len + 1, kInf), cur(l_len + 1, kInf);
  prev[0] = 0.0;
  for (std::size_t i = 1; i <= k_len; ++i) {
    cur[0] = kInf;
    for (std::size_t j = 1; j <= l_len; ++j) {
      double c = point_cost(a, i - 1, b, j - 1, metric);
      cur[j] = c + soft_min3(prev[j - 1], prev[j], cur[j - 1], gamma);
    }
    std::swap(prev, cur);
  }
  return {prev[l_len], ScoreKind::distance};
}

double log_gak(const Matrix& a, const Matrix& b, double gamma, Metric metric) {
  if (!(gamma > 0.0)) throw ArgumentError("gak needs gamma > 0");
  check_nonempty(a, b);
  const std::size_t k_len = a.cols(), l_len = b.cols();

  // Sum-product over the same alignment set as dtw, in the log domain.
  std::vector<double> prev(l_len + 1, -kInf), cur(l_len + 1, -kInf);
  prev[0] = 0.0;
  for (std::size_t i = 1; i <= k_len; ++i) {
    cur[0] = -kInf;
    for (std::size_t j = 1; j <= l_len; ++j) {
      double c = point_cost(a, i - 1, b, j - 1, metric);
      cur[j] = -c / gamma + log_sum_exp3(prev[j - 1], prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[l_len];
}

MatchScore gak(const Matrix& a, const Matrix& b, double gamma, Metric metric) {
  return {std::exp(log_gak(a, b, gamma, metric)), ScoreKind::similarity};
}

MatchScore mvm(const Matrix& query, const Matrix& target, int elasticity_v, Metric metric) {
  check_nonempty(query, target);
  if (elasticity_v < 1) throw ArgumentError("elasticity_v must be >= 1");
  const std::size_t k_len = query.cols(), l_len = target.cols();
  if (k_len > l_len) throw ArgumentError("mvm query must not be longer than the target");

  // Link width: target-index advance in [1, 1 + (L - K)], capped by the
  // user's elasticity bound. The first query element is treated as an
  // advance from a virtual start, so it falls under the same width.
  const std::size_t width =
      std::min<std::size_t>(1 + (l_len - k_len), static_cast<std::size_t>(elasticity_v));

  std::vector<double> prev(l_len, kInf), cur(l_len, kInf);
  for (std::size_t l = 0; l < width; ++l) prev[l] = point_cost(query, 0, target, l, metric);
  for (std::size_t k = 1; k < k_len; ++k) {
    for (std::size_t l = 0; l < l_len; ++l) {
      double best = kInf;
      std::size_t lo = (l >= width) ? l - width : 0;
      for (std::size_t lp = lo; lp < l; ++lp) best = std::min(best, prev[lp]);
      cur[l] = (best == kInf) ? kInf : point_cost(query, k, target, l, metric) + best;
    }
    std::swap(prev, cur);
    std::fill(cur.begin(), cur.end(), kInf);
  }
  double best = kInf;
  for (std::size_t l = 0; l < l_len; ++l) best = std::min(best, prev[l]);
  return {best, ScoreKind::distance};
}

double match_distance(Algorithm algorithm, const Matrix& a, const Matrix& b,
                      const MatchParams& params) {
  params.validate();
  switch (algorithm) {
    case Algorithm::dtw: return dtw(a, b, params.metric).value;
    case Algorithm::sdtw: return sdtw(a, b, params.gamma, params.metric).value;
    case Algorithm::gak: return -log_gak(a, b, params.gamma, params.metric);
    case Algorithm::mvm: return mvm(a, b, params.elasticity_v, params.metric).value;
  }
  throw ArgumentError("unknown algorithm");
}

}  // namespace wattmatch
