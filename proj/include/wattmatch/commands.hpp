// Copyright 2026 The WattMatch Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WATTMATCH_COMMANDS_HPP
#define WATTMATCH_COMMANDS_HPP

#include <optional>

#include "wattmatch/config.hpp"
#include "wattmatch/evaluation.hpp"
#include "wattmatch/synth.hpp"

namespace wattmatch {

// Command implementations behind both the C API and the CLI. All of them
// throw: ArgumentError/ConfigError for user mistakes, IoError for filesystem
// trouble. Key reference lives in the README.

/// Writes a synthetic corpus (channel feature CSVs, optional noise CSV,
/// manifest.json) into cfg "out". Byte-identical for identical seeds.
void cmd_synth(const RunConfig& cfg);

/// Converts a raw "t,i,v" recording (cfg "input") into a feature CSV
/// (cfg "out").
void cmd_extract(const RunConfig& cfg);

/// ReliefF ranking over a corpus directory; writes ranking.csv and
/// rank_plot.csv into cfg "out".
void cmd_rank(const RunConfig& cfg);

/// Pair mode (keys "a" and "b"): returns the score of matching the two
/// series. Identify mode (keys "refs" and "input"): writes per-frame channel
/// decisions to <out>/match.csv and returns the first frame's best score.
double cmd_match(const RunConfig& cfg);

/// Runs one evaluation protocol over a corpus directory and writes
/// report.json, confusion.csv and heatmap.csv (plus grid.csv with "grid" on)
/// into cfg "out". Returns the report.
EvalReport cmd_evaluate(const RunConfig& cfg);

/// Re-emits the CSV views (confusion.csv, heatmap.csv, per_scenario.csv) of a
/// saved report.json (cfg "input") into cfg "out".
void cmd_report(const RunConfig& cfg);

/// Corpus directory contents: channel series, optional noise, stats.
struct LoadedCorpus {
  std::vector<std::pair<int, FeatureSeries>> channels;
  FeatureSeries noise;
  bool has_noise = false;
  NormalizationStats stats;
  double rate_hz = 50.0;
};
LoadedCorpus load_corpus(const std::filesystem::path& dir);

}  // namespace wattmatch

#endif
