// Copyright 2026 The WattMatch Authors
// SPDX-License-Identifier: Apache-2.0

#include "wattmatch/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include <json.hpp>

#include "wattmatch/synth.hpp"
#include "wattmatch/threading.hpp"

namespace wattmatch {

Protocol protocol_from_name(const std::string& name) {
  if (name == "A" || name == "a") return Protocol::A;
  if (name == "B" || name == "b") return Protocol::B;
  if (name == "C" || name == "c") return Protocol::C;
  throw ArgumentError("unknown protocol: " + name);
}

const char* protocol_name(Protocol p) {
  switch (p) {
    case Protocol::A: return "A";
    case Protocol::B: return "B";
    case Protocol::C: return "C";
  }
  return "?";
}

namespace {

void check_confusion(const Confusion& confusion) {
  if (confusion.empty()) throw ArgumentError("confusion matrix is empty");
  const std::size_t n = confusion.size();
  std::int64_t total = 0;
  for (const auto& row : confusion) {
    if (row.size() != n) throw ArgumentError("confusion matrix must be square");
    for (auto v : row) {
      if (v < 0) throw ArgumentError("confusion entries must be non-negative");
      total += v;
    }
  }
  if (total == 0) throw ArgumentError("confusion matrix has no observations");
}

struct ClassCounts {
  double tp, tn, fp, fn;
};

ClassCounts one_vs_rest(const Confusion& confusion, std::size_t c) {
  const std::size_t n = confusion.size();
  double tp = static_cast<double>(confusion[c][c]);
  double fn = 0.0, fp = 0.0, total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      total += static_cast<double>(confusion[i][j]);
      if (i == c && j != c) fn += static_cast<double>(confusion[i][j]);
      if (i != c && j == c) fp += static_cast<double>(confusion[i][j]);
    }
  return {tp, total - tp - fn - fp, fp, fn};
}

}  // namespace

double accuracy(const Confusion& confusion) {
  check_confusion(confusion);
  const std::size_t n = confusion.size();
  double acc = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    ClassCounts k = one_vs_rest(confusion, c);
    acc += (k.tp + k.tn) / (k.tp + k.tn + k.fp + k.fn);
  }
  return acc / static_cast<double>(n);
}

double f1_score(const Confusion& confusion, std::vector<std::string>* warnings) {
  check_confusion(confusion);
  const std::size_t n = confusion.size();
  double f1 = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    ClassCounts k = one_vs_rest(confusion, c);
    if (k.tp + k.fn == 0.0) {
      if (warnings)
        warnings->push_back("class " + std::to_string(c) + " has zero support; F1 term = 0");
      continue;
    }
    double denom = 2.0 * k.tp + k.fn + k.fp;
    if (denom > 0.0) f1 += 2.0 * k.tp / denom;
  }
  return f1 / static_cast<double>(n);
}

FeatureSeries mix_noise(const FeatureSeries& tv, const FeatureSeries& corpus,
                        const NoiseScenario& scenario) {
  if (scenario.duration != tv.length())
    throw ArgumentError("scenario duration must match the tv signal length");
  if (scenario.offset + scenario.duration > corpus.length())
    throw ArgumentError("noise scenario overruns the corpus; refusing to zero-pad");

  FeatureSeries slice;
  slice.feature_names = corpus.feature_names;
  slice.rate_hz = corpus.rate_hz;
  slice.values = corpus.values.slice_cols(scenario.offset, scenario.duration);
  return aggregate(tv, {&slice});
}

FeatureSeries scale_noise(const FeatureSeries& noise, double scale) {
  if (!(scale >= 0.0)) throw ArgumentError("noise scale must be >= 0");
  static const std::set<std::string> additive = {"i", "i_frms", "p", "q", "s"};
  FeatureSeries out = noise;
  for (std::size_t r = 0; r < out.feature_count(); ++r)
    if (additive.count(out.feature_names[r]))
      for (double& v : out.values.row(r)) v *= scale;
  return out;
}

namespace {

// References restricted to the feature subset, normalized, framed at every
// needed offset and DC-removed, ready for repeated matching.
struct PreparedRefs {
  std::vector<int> channel_ids;
  std::vector<std::vector<Matrix>> windows;  // [ref][frame] matrices
  Matrix flat;                               // the all-zero no-TV signature
  NoTvPolicy policy = NoTvPolicy::extra_class;
  double theta = 0.0;
  NormalizationStats stats;  // empty location = no normalization
  std::vector<std::size_t> offsets;
};

PreparedRefs prepare_refs(const ReferenceSet& refs, const EvalParams& params,
                          std::size_t signal_len) {
  refs.validate();
  PreparedRefs out;
  out.policy = refs.policy;
  out.theta = refs.theta;
  out.channel_ids = refs.channel_ids();

  for (std::size_t off = 0; off + params.window <= signal_len;
       off += (params.hop ? params.hop : params.window))
    out.offsets.push_back(off);
  if (out.offsets.empty()) throw EmptyInputError("window exceeds the signal length");

  std::vector<FeatureSeries> selected;
  selected.reserve(refs.references.size());
  for (const auto& entry : refs.references) {
    if (entry.series.length() < signal_len)
      throw ArgumentError("reference " + std::to_string(entry.channel_id) +
                          " is shorter than the test signals");
    selected.push_back(entry.series.select(params.features));
  }
  if (params.normalize && params.features.size() > 1) {
    std::vector<const FeatureSeries*> pooled;
    for (const auto& s : selected) pooled.push_back(&s);
    out.stats = corpus_stats(pooled);
    for (auto& s : selected) s = normalize_features(s, out.stats);
  }

  out.windows.resize(selected.size());
  for (std::size_t m = 0; m < selected.size(); ++m)
    for (std::size_t off : out.offsets) {
      Frame f;
      f.values = selected[m].values.slice_cols(off, params.window);
      f.start_index = off;
      out.windows[m].push_back(remove_dc(f).values);
    }
  out.flat = Matrix(params.features.size(), params.window, 0.0);
  return out;
}

// Per-frame winning channels of one (class signal, scenario) cell.
std::vector<int> classify_signal(const FeatureSeries& aggregate_series, const PreparedRefs& refs,
                                 const EvalParams& params) {
  FeatureSeries working = aggregate_series.select(params.features);
  if (!refs.stats.location.empty()) working = normalize_features(working, refs.stats);

  std::vector<int> decisions;
  decisions.reserve(refs.offsets.size());
  for (std::size_t w = 0; w < refs.offsets.size(); ++w) {
    Frame frame;
    frame.values = working.values.slice_cols(refs.offsets[w], params.window);
    frame.start_index = refs.offsets[w];
    frame = remove_dc(frame);

    std::vector<double> scores;
    scores.reserve(refs.windows.size() + 1);
    for (const auto& ref_windows : refs.windows)
      scores.push_back(
          match_distance(params.algorithm, frame.values, ref_windows[w], params.match));
    if (refs.policy == NoTvPolicy::extra_class)
      scores.push_back(match_distance(params.algorithm, frame.values, refs.flat, params.match));
    decisions.push_back(argmin_channel(scores, refs.channel_ids, refs.policy, refs.theta));
  }
  return decisions;
}

const ReferenceSet* active_refs(const EvalInputs& inputs, Protocol protocol) {
  if (protocol == Protocol::C) {
    if (!inputs.refs_other)
      throw ConfigError("protocol C needs the second monitor's reference set");
    return inputs.refs_other;
  }
  if (!inputs.refs_same) throw ConfigError("missing reference set");
  return inputs.refs_same;
}

void check_inputs(const EvalInputs& inputs, const EvalParams& params) {
  if (inputs.test_signals.empty()) throw ConfigError("no test signals");
  if (params.protocol != Protocol::A) {
    if (!inputs.noise) throw ConfigError("protocols B and C need a noise corpus");
  }
  if (params.scenarios < 1) throw ConfigError("scenario count must be >= 1");
  int last = 0;
  for (const auto& [id, series] : inputs.test_signals) {
    if (id <= last) throw ConfigError("test signals must have ascending channel ids");
    last = id;
    series->validate();
    if (series->length() != inputs.test_signals.front().second->length())
      throw ConfigError("test signals must share one length");
  }
}

}  // namespace

EvalReport run_protocol(const EvalInputs& inputs, const EvalParams& params) {
  params.match.validate();
  check_inputs(inputs, params);
  const ReferenceSet* refs = active_refs(inputs, params.protocol);

  const std::size_t t_len = inputs.test_signals.front().second->length();
  const int scenario_count = (params.protocol == Protocol::A) ? 1 : params.scenarios;

  FeatureSeries noise;
  if (params.protocol != Protocol::A) {
    noise = scale_noise(*inputs.noise, params.noise_scale);
    if (static_cast<std::size_t>(scenario_count) * t_len > noise.length())
      throw ConfigError("noise corpus too short for the requested scenarios");
  }

  PreparedRefs prepared = prepare_refs(*refs, params, t_len);

  // Class order: channels by id, then the no-TV class.
  const std::size_t n_channels = inputs.test_signals.size();
  const std::size_t n_classes = n_channels + 1;
  std::vector<std::string> labels;
  for (const auto& [id, series] : inputs.test_signals) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "ch%02d", id);
    labels.emplace_back(buf);
  }
  labels.emplace_back("no_tv");

  auto class_index = [&](int channel) -> std::size_t {
    if (channel == kNoTvChannel) return n_channels;
    for (std::size_t c = 0; c < n_channels; ++c)
      if (inputs.test_signals[c].first == channel) return c;
    throw ArgumentError("decision for unknown channel id");
  };

  const FeatureSeries idle = gen_idle_signal(t_len);
  const std::size_t cells = static_cast<std::size_t>(scenario_count) * n_classes;
  std::vector<std::vector<int>> decisions(cells);

  parallel_for(cells, params.threads, [&](std::size_t cell) {
    const auto scenario_idx = static_cast<int>(cell / n_classes);
    const std::size_t cls = cell % n_classes;
    const FeatureSeries& base = (cls < n_channels) ? *inputs.test_signals[cls].second : idle;

    if (params.protocol == Protocol::A) {
      decisions[cell] = classify_signal(base, prepared, params);
      return;
    }
    NoiseScenario scenario;
    scenario.scenario_id = scenario_idx;
    scenario.offset = static_cast<std::size_t>(scenario_idx) * t_len;
    scenario.duration = t_len;
    decisions[cell] = classify_signal(mix_noise(base, noise, scenario), prepared, params);
  });

  EvalReport report;
  report.labels = labels;
  report.confusion.assign(n_classes, std::vector<std::int64_t>(n_classes, 0));

  // Deterministic merge in scenario-major order.
  for (int s = 0; s < scenario_count; ++s) {
    Confusion scenario_conf(n_classes, std::vector<std::int64_t>(n_classes, 0));
    for (std::size_t cls = 0; cls < n_classes; ++cls) {
      const auto& cell = decisions[static_cast<std::size_t>(s) * n_classes + cls];
      for (int predicted : cell) {
        ++scenario_conf[cls][class_index(predicted)];
        ++report.confusion[cls][class_index(predicted)];
        ++report.frames_total;
      }
    }
    report.per_scenario.push_back({s, accuracy(scenario_conf), f1_score(scenario_conf)});
  }
  report.acc = accuracy(report.confusion);
  report.f1 = f1_score(report.confusion);

  report.algorithm = algorithm_name(params.algorithm);
  report.protocol = protocol_name(params.protocol);
  report.metric = metric_name(params.match.metric);
  report.gamma = params.match.gamma;
  report.elasticity_v = params.match.elasticity_v;
  report.window = params.window;
  report.hop = params.hop ? params.hop : params.window;
  report.features = params.features;
  report.scenarios = scenario_count;
  report.noise_scale = params.noise_scale;
  report.seed = params.seed;
  return report;
}

std::pair<double, std::vector<GridRow>> grid_search(const EvalInputs& inputs,
                                                    const EvalParams& base,
                                                    const std::vector<double>& grid,
                                                    double bootstrap_fraction) {
  if (grid.empty()) throw ArgumentError("grid must not be empty");
  if (!(bootstrap_fraction > 0.0 && bootstrap_fraction < 1.0))
    throw ArgumentError("bootstrap fraction must be in (0, 1)");

  EvalParams params = base;
  params.scenarios = std::max(
      1, static_cast<int>(std::ceil(bootstrap_fraction * static_cast<double>(base.scenarios))));

  std::vector<GridRow> table;
  double best_param = grid.front();
  double best_acc = -1.0;
  for (double value : grid) {
    switch (params.algorithm) {
      case Algorithm::sdtw:
      case Algorithm::gak:
        params.match.gamma = value;
        break;
      case Algorithm::mvm:
        params.match.elasticity_v = static_cast<int>(std::llround(value));
        break;
      case Algorithm::dtw:
        break;  // parameter-free; the grid is evaluated as-is
    }
    double acc = run_protocol(inputs, params).acc;
    table.push_back({value, acc});
    if (acc > best_acc) {  // strict: ties keep the earlier (smaller) value
      best_acc = acc;
      best_param = value;
    }
  }
  return {best_param, table};
}

double calibrate_threshold(const EvalInputs& inputs, const EvalParams& params,
                           double bootstrap_fraction) {
  check_inputs(inputs, params);
  const ReferenceSet* refs = active_refs(inputs, params.protocol);
  const std::size_t t_len = inputs.test_signals.front().second->length();
  PreparedRefs prepared = prepare_refs(*refs, params, t_len);

  int scenario_count = (params.protocol == Protocol::A)
                           ? 1
                           : std::max(1, static_cast<int>(std::ceil(
                                             bootstrap_fraction *
                                             static_cast<double>(params.scenarios))));
  FeatureSeries noise;
  if (params.protocol != Protocol::A) {
    if (!inputs.noise) throw ConfigError("threshold calibration needs the noise corpus");
    noise = scale_noise(*inputs.noise, params.noise_scale);
  }

  std::vector<double> self_distances;
  for (int s = 0; s < scenario_count; ++s) {
    for (std::size_t cls = 0; cls < inputs.test_signals.size(); ++cls) {
      FeatureSeries agg = *inputs.test_signals[cls].second;
      if (params.protocol != Protocol::A) {
        NoiseScenario scenario{s, static_cast<std::size_t>(s) * t_len, t_len};
        agg = mix_noise(agg, noise, scenario);
      }
      FeatureSeries working = agg.select(params.features);
      if (!prepared.stats.location.empty()) working = normalize_features(working, prepared.stats);
      for (std::size_t w = 0; w < prepared.offsets.size(); ++w) {
        Frame frame;
        frame.values = working.values.slice_cols(prepared.offsets[w], params.window);
        frame.start_index = prepared.offsets[w];
        frame = remove_dc(frame);
        self_distances.push_back(
            match_distance(params.algorithm, frame.values, prepared.windows[cls][w], params.match));
      }
    }
  }
  if (self_distances.empty()) throw ConfigError("no frames available for threshold calibration");
  std::sort(self_distances.begin(), self_distances.end());
  auto rank = static_cast<std::size_t>(
      std::ceil(0.99 * static_cast<double>(self_distances.size())));
  rank = std::min(std::max<std::size_t>(rank, 1), self_distances.size());
  return self_distances[rank - 1];
}

namespace {

nlohmann::ordered_json report_to_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["algorithm"] = r.algorithm;
  j["protocol"] = r.protocol;
  j["metric"] = r.metric;
  j["gamma"] = r.gamma;
  j["elasticity_v"] = r.elasticity_v;
  j["window"] = r.window;
  j["hop"] = r.hop;
  j["features"] = r.features;
  j["scenarios"] = r.scenarios;
  j["noise_scale"] = r.noise_scale;
  j["seed"] = r.seed;
  j["labels"] = r.labels;
  j["confusion"] = r.confusion;
  j["acc"] = r.acc;
  j["f1"] = r.f1;
  j["frames_total"] = r.frames_total;
  auto per = nlohmann::ordered_json::array();
  for (const auto& s : r.per_scenario)
    per.push_back({{"scenario", s.scenario_id}, {"acc", s.acc}, {"f1", s.f1}});
  j["per_scenario"] = per;
  return j;
}

}  // namespace

void write_report_json(const EvalReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << report_to_json(report).dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

EvalReport read_report_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad report json: " + std::string(e.what()));
  }
  EvalReport r;
  r.algorithm = j.value("algorithm", "");
  r.protocol = j.value("protocol", "");
  r.metric = j.value("metric", "");
  r.gamma = j.value("gamma", 0.0);
  r.elasticity_v = j.value("elasticity_v", 0);
  r.window = j.value("window", std::size_t{0});
  r.hop = j.value("hop", std::size_t{0});
  r.features = j.value("features", std::vector<std::string>{});
  r.scenarios = j.value("scenarios", 0);
  r.noise_scale = j.value("noise_scale", 1.0);
  r.seed = j.value("seed", std::uint64_t{0});
  r.labels = j.at("labels").get<std::vector<std::string>>();
  r.confusion = j.at("confusion").get<Confusion>();
  r.acc = j.value("acc", 0.0);
  r.f1 = j.value("f1", 0.0);
  r.frames_total = j.value("frames_total", std::int64_t{0});
  for (const auto& s : j.value("per_scenario", nlohmann::json::array()))
    r.per_scenario.push_back({s.value("scenario", 0), s.value("acc", 0.0), s.value("f1", 0.0)});
  return r;
}

void write_confusion_csv(const EvalReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "label";
  for (const auto& l : report.labels) out << ',' << l;
  out << '\n';
  for (std::size_t i = 0; i < report.confusion.size(); ++i) {
    out << report.labels[i];
    for (auto v : report.confusion[i]) out << ',' << v;
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

void write_heatmap_csv(const EvalReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "true,predicted,count\n";
  for (std::size_t i = 0; i < report.confusion.size(); ++i)
    for (std::size_t j = 0; j < report.confusion[i].size(); ++j)
      out << report.labels[i] << ',' << report.labels[j] << ',' << report.confusion[i][j] << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace wattmatch
