// Copyright 2026 The WattMatch Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WATTMATCH_EVALUATION_HPP
#define WATTMATCH_EVALUATION_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "wattmatch/pipeline.hpp"

namespace wattmatch {

enum class Protocol { A, B, C };

Protocol protocol_from_name(const std::string& name);
const char* protocol_name(Protocol p);

/// One slice of the noise corpus mixed into a test signal.
struct NoiseScenario {
  int scenario_id = 0;
  std::size_t offset = 0;    // sample index into the noise corpus
  std::size_t duration = 0;  // samples; must match the tv signal length
};

using Confusion = std::vector<std::vector<std::int64_t>>;

/// Multiclass accuracy: one-vs-rest binarization per class, macro-averaged.
double accuracy(const Confusion& confusion);

/// Macro-averaged one-vs-rest F1. Classes with zero support contribute 0 and
/// are reported through `warnings` when provided.
double f1_score(const Confusion& confusion, std::vector<std::string>* warnings = nullptr);

/// Slices the noise corpus at the scenario offset and aggregates it with the
/// tv signal. Overrunning the corpus is an error; nothing is zero-padded.
FeatureSeries mix_noise(const FeatureSeries& tv, const FeatureSeries& corpus,
                        const NoiseScenario& scenario);

/// Multiplies the additive feature rows (i, i_frms, p, q, s) by `scale`;
/// ratio and mains rows are left alone. scale = 0 silences the noise.
FeatureSeries scale_noise(const FeatureSeries& noise, double scale);

struct EvalParams {
  Algorithm algorithm = Algorithm::dtw;
  MatchParams match;
  Protocol protocol = Protocol::A;
  std::size_t window = kDeskWindow;
  std::size_t hop = 0;  // 0 means window (non-overlapping)
  std::vector<std::string> features = {"p"};
  int scenarios = 59;
  double noise_scale = 1.0;
  std::uint64_t seed = 1;
  std::size_t threads = 0;
  bool normalize = true;  // z-score from the reference corpus, multivariate only
};

struct EvalInputs {
  std::vector<std::pair<int, const FeatureSeries*>> test_signals;  // ascending channel ids
  const FeatureSeries* noise = nullptr;      // protocols B and C
  const ReferenceSet* refs_same = nullptr;   // protocols A and B
  const ReferenceSet* refs_other = nullptr;  // protocol C (the second monitor)
};

struct EvalReport {
  std::vector<std::string> labels;  // channels in id order, then "no_tv"
  Confusion confusion;
  double acc = 0.0;
  double f1 = 0.0;
  struct ScenarioMetrics {
    int scenario_id;
    double acc;
    double f1;
  };
  std::vector<ScenarioMetrics> per_scenario;
  std::int64_t frames_total = 0;

  // Echo of the run configuration.
  std::string algorithm, protocol, metric;
  double gamma = 0.0;
  int elasticity_v = 0;
  std::size_t window = 0, hop = 0;
  std::vector<std::string> features;
  int scenarios = 0;
  double noise_scale = 1.0;
  std::uint64_t seed = 0;
};

/// Runs one protocol over every class (channels plus no-TV) and scenario:
/// aggregate, frame, DC-remove, identify, accumulate the confusion. The
/// confusion merge order is fixed, so reports are identical across thread
/// counts.
EvalReport run_protocol(const EvalInputs& inputs, const EvalParams& params);

struct GridRow {
  double param;
  double acc;
};

/// Accuracy per grid point on a bootstrap split (the first
/// ceil(fraction * scenarios) scenarios); returns the argmax parameter with
/// ties to the smaller value, plus the full table. The grid sets gamma for
/// sdtw/gak and the elasticity bound for mvm.
std::pair<double, std::vector<GridRow>> grid_search(const EvalInputs& inputs,
                                                    const EvalParams& base,
                                                    const std::vector<double>& grid,
                                                    double bootstrap_fraction);

/// 99th percentile of true-class self-distances over a bootstrap split, the
/// cutoff used by the threshold no-TV policy.
double calibrate_threshold(const EvalInputs& inputs, const EvalParams& params,
                           double bootstrap_fraction = 0.5);

void write_report_json(const EvalReport& report, const std::filesystem::path& path);
EvalReport read_report_json(const std::filesystem::path& path);
void write_confusion_csv(const EvalReport& report, const std::filesystem::path& path);
/// Long-form heatmap rows: true label, predicted label, count.
void write_heatmap_csv(const EvalReport& report, const std::filesystem::path& path);

}  // namespace wattmatch

#endif
