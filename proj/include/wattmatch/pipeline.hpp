// Copyright 2026 The WattMatch Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WATTMATCH_PIPELINE_HPP
#define WATTMATCH_PIPELINE_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "wattmatch/matching.hpp"
#include "wattmatch/signals.hpp"

namespace wattmatch {

/// Channel id of the "no TV" decision.
inline constexpr int kNoTvChannel = 0;

enum class NoTvPolicy { extra_class, threshold };

struct ReferenceSet {
  struct Entry {
    int channel_id = 0;
    FeatureSeries series;
  };
  std::vector<Entry> references;  // ascending unique channel ids >= 1
  NoTvPolicy policy = NoTvPolicy::extra_class;
  double theta = 0.0;  // cutoff for the threshold policy

  void validate() const;
  std::vector<int> channel_ids() const;
};

struct Identification {
  int channel = kNoTvChannel;   // kNoTvChannel or a reference channel id
  std::vector<double> scores;   // per reference in id order; +1 trailing
                                // no-TV score under the extra-class policy
  std::size_t frame_offset = 0;
};

struct NormalizationStats {
  std::vector<double> location;
  std::vector<double> scale;
  std::vector<std::size_t> flagged;  // features whose zero scale was replaced by 1
};

/// Eq.-style aggregation of a target device with other loads, one rule per
/// feature: additive rows (i, i_frms, p, q, s and any unknown name) sum;
/// mains rows (v_peak, v_frms, v, f) come from the first source; ratio rows
/// (crest, phi, THD, HD) combine by active-power-weighted average.
FeatureSeries aggregate(const FeatureSeries& tv, const std::vector<const FeatureSeries*>& others);

/// Per-feature z-score statistics pooled over a corpus of series.
NormalizationStats corpus_stats(const std::vector<const FeatureSeries*>& corpus);

/// Per-feature affine map (x - location) / scale; zero scales are replaced by
/// 1 and recorded in the returned stats' `flagged` list.
FeatureSeries normalize_features(const FeatureSeries& series, const NormalizationStats& stats);

/// Deterministic comparator behind the identification argmin: scores in
/// reference order (plus a trailing no-TV score when present), strict '<'
/// scan so that ties resolve to the lowest channel id and real channels win
/// exact ties against the no-TV class.
int argmin_channel(const std::vector<double>& scores, const std::vector<int>& channel_ids,
                   NoTvPolicy policy, double theta);

/// Matches a DC-removed frame against every reference (windowed at the same
/// offset and DC-removed identically) plus the no-TV class, and returns the
/// winning channel. Feature rows of frame and references must already be
/// aligned and restricted to the configured subset.
Identification identify(const Frame& frame, const ReferenceSet& refs, Algorithm algorithm,
                        const MatchParams& params);

/// Reference sets persist as a directory of feature CSVs plus manifest.json
/// (channel ids, feature order, normalization stats, rate).
void save_reference_set(const ReferenceSet& refs, const NormalizationStats& stats,
                        const std::filesystem::path& dir);
ReferenceSet load_reference_set(const std::filesystem::path& dir, NormalizationStats* stats = nullptr);

}  // namespace wattmatch

#endif
