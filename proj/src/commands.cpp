// Copyright 2026 The WattMatch Authors
// SPDX-License-Identifier: Apache-2.0

#include "wattmatch/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "wattmatch/csv.hpp"
#include "wattmatch/features.hpp"
#include "wattmatch/ranking.hpp"

namespace wattmatch {

namespace {

std::filesystem::path required_path(const RunConfig& cfg, const std::string& key) {
  std::string value = cfg.get(key, "");
  if (value.empty()) throw ConfigError("missing required key '" + key + "'");
  return value;
}

MatchParams match_params(const RunConfig& cfg) {
  MatchParams p;
  p.gamma = cfg.get_double("gamma", 5.0);
  p.elasticity_v = static_cast<int>(cfg.get_int("elasticity_v", 10));
  p.metric = metric_from_name(cfg.get("metric", "euclidean"));
  p.validate();
  return p;
}

std::vector<std::string> all_feature_names() {
  const auto& names = feature_names();
  return {names.begin(), names.end()};
}

// "p" (default), "all", "top8", or an explicit comma list.
std::vector<std::string> resolve_features(const RunConfig& cfg, const ReferenceSet& refs,
                                          std::uint64_t seed) {
  std::string spec = cfg.get("features", "p");
  if (spec == "all") return all_feature_names();
  if (spec == "top8") {
    // Rank on the reference corpus itself: per-cycle instances labeled by
    // channel.
    std::size_t total = 0;
    for (const auto& e : refs.references) total += e.series.length();
    const std::size_t f = refs.references.front().series.feature_count();
    Matrix data(total, f);
    std::vector<int> labels(total);
    std::size_t row = 0;
    for (const auto& e : refs.references)
      for (std::size_t k = 0; k < e.series.length(); ++k, ++row) {
        labels[row] = e.channel_id;
        for (std::size_t j = 0; j < f; ++j) data.at(row, j) = e.series.values.at(j, k);
      }
    RankedFeatures ranked = relieff(data, labels, 10, 0, seed);
    std::vector<std::string> out;
    for (std::size_t r = 0; r < std::min<std::size_t>(8, ranked.order.size()); ++r)
      out.push_back(refs.references.front().series.feature_names[ranked.order[r]]);
    std::sort(out.begin(), out.end());  // stable row order regardless of weights
    return out;
  }
  std::vector<std::string> names = cfg.get_list("features");
  if (names.empty()) names.push_back(spec);
  return names;
}

void write_corpus_manifest(const std::filesystem::path& dir, const LoadedCorpus& corpus,
                           const RunConfig& cfg, bool has_noise) {
  nlohmann::ordered_json manifest;
  manifest["rate_hz"] = corpus.rate_hz;
  manifest["feature_order"] = corpus.channels.front().second.feature_names;
  auto channels = nlohmann::ordered_json::array();
  for (const auto& [id, series] : corpus.channels) {
    char name[32];
    std::snprintf(name, sizeof(name), "channel_%02d.csv", id);
    channels.push_back({{"id", id}, {"file", name}});
  }
  manifest["channels"] = channels;
  if (has_noise) manifest["noise_file"] = "noise.csv";
  manifest["normalization"] = {{"location", corpus.stats.location},
                               {"scale", corpus.stats.scale}};
  manifest["profile"] = cfg.get("profile", "acer");
  manifest["seed"] = cfg.get_seed();
  manifest["duration_s"] = cfg.get_double("duration", 60.0);
  manifest["scenarios"] = cfg.get_int("scenarios", 59);
  manifest["max_appliances"] = cfg.get_int("max_appliances", 26);

  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) throw IoError("cannot write " + (dir / "manifest.json").string());
  out << manifest.dump(2) << '\n';
}

}  // namespace

LoadedCorpus load_corpus(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw IoError("cannot open " + (dir / "manifest.json").string());
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad manifest in " + dir.string() + ": " + e.what());
  }

  LoadedCorpus corpus;
  corpus.rate_hz = manifest.value("rate_hz", 50.0);
  for (const auto& ch : manifest.at("channels")) {
    int id = ch.at("id").get<int>();
    corpus.channels.emplace_back(id, read_series_csv(dir / ch.at("file").get<std::string>()));
  }
  std::sort(corpus.channels.begin(), corpus.channels.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  if (manifest.contains("noise_file")) {
    corpus.noise = read_series_csv(dir / manifest["noise_file"].get<std::string>());
    corpus.has_noise = true;
  }
  if (manifest.contains("normalization")) {
    corpus.stats.location = manifest["normalization"]["location"].get<std::vector<double>>();
    corpus.stats.scale = manifest["normalization"]["scale"].get<std::vector<double>>();
  }
  return corpus;
}

void cmd_synth(const RunConfig& cfg) {
  std::filesystem::path out_dir = required_path(cfg, "out");

  CorpusParams params;
  params.channels = static_cast<int>(cfg.get_int("channels", 20));
  params.duration_s = cfg.get_double("duration", 60.0);
  params.scenarios = static_cast<int>(cfg.get_int("scenarios", 59));
  params.max_appliances = static_cast<int>(cfg.get_int("max_appliances", 26));
  params.seed = cfg.get_seed();
  params.with_noise = cfg.get_bool("noise", true);
  MonitorProfile profile = MonitorProfile::by_name(cfg.get("profile", "acer"));

  Corpus generated = build_corpus(params, profile);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  LoadedCorpus corpus;
  corpus.rate_hz = 50.0;
  for (auto& ch : generated.channels) corpus.channels.emplace_back(ch.channel_id, std::move(ch.series));

  std::vector<const FeatureSeries*> pooled;
  for (const auto& [id, series] : corpus.channels) pooled.push_back(&series);
  corpus.stats = corpus_stats(pooled);

  for (const auto& [id, series] : corpus.channels) {
    char name[32];
    std::snprintf(name, sizeof(name), "channel_%02d.csv", id);
    write_series_csv(series, out_dir / name);
  }
  if (generated.has_noise) write_series_csv(generated.noise, out_dir / "noise.csv");
  write_corpus_manifest(out_dir, corpus, cfg, generated.has_noise);
}

void cmd_extract(const RunConfig& cfg) {
  auto [i_wave, v_wave] = read_waveform_csv(required_path(cfg, "input"));
  write_series_csv(extract_series(i_wave, v_wave), required_path(cfg, "out"));
}

void cmd_rank(const RunConfig& cfg) {
  LoadedCorpus corpus = load_corpus(required_path(cfg, "corpus"));
  if (corpus.channels.size() < 2)
    throw ConfigError("ranking needs at least two channels in the corpus");

  std::size_t total = 0;
  for (const auto& [id, series] : corpus.channels) total += series.length();
  const std::size_t f = corpus.channels.front().second.feature_count();
  Matrix data(total, f);
  std::vector<int> labels(total);
  std::size_t row = 0;
  for (const auto& [id, series] : corpus.channels)
    for (std::size_t k = 0; k < series.length(); ++k, ++row) {
      labels[row] = id;
      for (std::size_t j = 0; j < f; ++j) data.at(row, j) = series.values.at(j, k);
    }

  RankedFeatures ranked = relieff(data, labels, static_cast<int>(cfg.get_int("k_neighbors", 10)),
                                  static_cast<std::size_t>(cfg.get_int("sample_count", 0)),
                                  cfg.get_seed());

  std::filesystem::path out_dir = required_path(cfg, "out");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  const auto& names = corpus.channels.front().second.feature_names;
  {
    std::ofstream out(out_dir / "ranking.csv", std::ios::binary);
    if (!out) throw IoError("cannot write ranking.csv");
    out << "feature,weight,rank\n";
    std::vector<std::size_t> rank_of(names.size());
    for (std::size_t r = 0; r < ranked.order.size(); ++r) rank_of[ranked.order[r]] = r + 1;
    char buf[64];
    for (std::size_t j = 0; j < names.size(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.10g", ranked.weights[j]);
      out << names[j] << ',' << buf << ',' << rank_of[j] << '\n';
    }
  }
  {
    std::ofstream out(out_dir / "rank_plot.csv", std::ios::binary);
    if (!out) throw IoError("cannot write rank_plot.csv");
    out << "feature,group,weight\n";
    char buf[64];
    for (std::size_t r = 0; r < ranked.order.size(); ++r) {
      std::size_t j = ranked.order[r];
      std::snprintf(buf, sizeof(buf), "%.10g", ranked.weights[j]);
      out << names[j] << ',' << (is_electrical_feature(j) ? "electrical" : "statistical") << ','
          << buf << '\n';
    }
  }
}

double cmd_match(const RunConfig& cfg) {
  MatchParams params = match_params(cfg);
  Algorithm algorithm = algorithm_from_name(cfg.get("algorithm", "dtw"));

  if (cfg.has("a") || cfg.has("b")) {
    FeatureSeries a = read_series_csv(required_path(cfg, "a"));
    FeatureSeries b = read_series_csv(required_path(cfg, "b"));
    if (cfg.has("features")) {
      auto names = cfg.get_list("features");
      a = a.select(names);
      b = b.select(names);
    }
    Matrix ma = a.values, mb = b.values;
    if (cfg.get_bool("dc_remove", false)) {
      Frame fa{ma, 0, false}, fb{mb, 0, false};
      ma = remove_dc(fa).values;
      mb = remove_dc(fb).values;
    }
    return match_distance(algorithm, ma, mb, params);
  }

  // Identify mode: per-frame decisions of an input series against a
  // reference directory.
  ReferenceSet refs = load_reference_set(required_path(cfg, "refs"));
  FeatureSeries input = read_series_csv(required_path(cfg, "input"));
  auto window = static_cast<std::size_t>(cfg.get_int("window", kDeskWindow));
  auto hop = static_cast<std::size_t>(cfg.get_int("hop", 0));
  std::vector<std::string> names =
      cfg.has("features") ? cfg.get_list("features") : std::vector<std::string>{"p"};

  ReferenceSet working = refs;
  for (auto& e : working.references) e.series = e.series.select(names);
  FeatureSeries selected = input.select(names);

  std::filesystem::path out_dir = required_path(cfg, "out");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  std::ofstream out(out_dir / "match.csv", std::ios::binary);
  if (!out) throw IoError("cannot write match.csv");
  out << "frame_offset,channel,score\n";

  double first_score = 0.0;
  bool first = true;
  for (Frame& frame : frame_block(selected, window, hop ? hop : window)) {
    frame = remove_dc(frame);
    Identification id = identify(frame, working, algorithm, params);
    double best = *std::min_element(id.scores.begin(), id.scores.end());
    if (first) {
      first_score = best;
      first = false;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", best);
    out << frame.start_index << ',' << id.channel << ',' << buf << '\n';
  }
  return first_score;
}

EvalReport cmd_evaluate(const RunConfig& cfg) {
  LoadedCorpus corpus = load_corpus(required_path(cfg, "corpus"));

  EvalParams params;
  params.algorithm = algorithm_from_name(cfg.get("algorithm", "dtw"));
  params.match = match_params(cfg);
  params.protocol = protocol_from_name(cfg.get("protocol", "A"));
  params.window = static_cast<std::size_t>(cfg.get_int("window", kDeskWindow));
  if (cfg.get_bool("full_scale", false)) {
    params.window = kDefaultWindow;
    std::cerr << "wattmatch: full-scale window (" << kDefaultWindow
              << " samples); expect long runtimes\n";
  }
  params.hop = static_cast<std::size_t>(cfg.get_int("hop", 0));
  params.scenarios = static_cast<int>(cfg.get_int("scenarios", 59));
  params.noise_scale = cfg.get_double("noise_scale", 1.0);
  params.seed = cfg.get_seed();
  params.threads = static_cast<std::size_t>(cfg.get_int("threads", 0));
  params.normalize = cfg.get_bool("normalize", true);

  // Same-monitor references are the corpus channels themselves.
  ReferenceSet refs_same;
  for (auto& [id, series] : corpus.channels) refs_same.references.push_back({id, series});

  ReferenceSet refs_other;
  bool have_other = false;
  if (cfg.has("refs_b")) {
    refs_other = load_reference_set(cfg.get("refs_b", ""));
    have_other = true;
  }
  if (params.protocol == Protocol::C && !have_other)
    throw ConfigError("protocol C needs refs_b (the second monitor's reference directory)");

  std::string policy = cfg.get("no_tv", "extra_class");
  NoTvPolicy no_tv;
  if (policy == "extra_class")
    no_tv = NoTvPolicy::extra_class;
  else if (policy == "threshold")
    no_tv = NoTvPolicy::threshold;
  else
    throw ConfigError("unknown no_tv policy: " + policy);
  refs_same.policy = no_tv;
  refs_other.policy = no_tv;

  const ReferenceSet& active = (params.protocol == Protocol::C) ? refs_other : refs_same;
  params.features = resolve_features(cfg, active, params.seed);

  EvalInputs inputs;
  for (const auto& [id, series] : corpus.channels) inputs.test_signals.emplace_back(id, &series);
  if (corpus.has_noise) inputs.noise = &corpus.noise;
  inputs.refs_same = &refs_same;
  if (have_other) inputs.refs_other = &refs_other;

  if (no_tv == NoTvPolicy::threshold) {
    std::string theta = cfg.get("theta", "auto");
    double value;
    if (theta == "auto") {
      value = calibrate_threshold(inputs, params);
    } else {
      RunConfig probe;
      probe.set("theta", theta);
      value = probe.get_double("theta", 0.0);
    }
    refs_same.theta = value;
    refs_other.theta = value;
  }

  std::filesystem::path out_dir = required_path(cfg, "out");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  if (cfg.get_bool("grid", false)) {
    std::vector<double> grid;
    switch (params.algorithm) {
      case Algorithm::sdtw:
      case Algorithm::gak:
        grid = {1, 2, 5, 10, 100, 500};
        break;
      case Algorithm::mvm:
        grid = {5, 10, 15, 20, 25, 30};
        break;
      case Algorithm::dtw:
        grid = {0};  // parameter-free
        break;
    }
    auto [best, table] = grid_search(inputs, params, grid, 0.5);
    std::ofstream out(out_dir / "grid.csv", std::ios::binary);
    if (!out) throw IoError("cannot write grid.csv");
    out << "param,acc\n";
    char buf[64];
    for (const auto& row : table) {
      std::snprintf(buf, sizeof(buf), "%.10g,%.10g", row.param, row.acc);
      out << buf << '\n';
    }
    switch (params.algorithm) {
      case Algorithm::sdtw:
      case Algorithm::gak:
        params.match.gamma = best;
        break;
      case Algorithm::mvm:
        params.match.elasticity_v = static_cast<int>(std::llround(best));
        break;
      case Algorithm::dtw:
        break;
    }
  }

  EvalReport report = run_protocol(inputs, params);
  write_report_json(report, out_dir / "report.json");
  write_confusion_csv(report, out_dir / "confusion.csv");
  write_heatmap_csv(report, out_dir / "heatmap.csv");
  return report;
}

void cmd_report(const RunConfig& cfg) {
  EvalReport report = read_report_json(required_path(cfg, "input"));
  std::filesystem::path out_dir = required_path(cfg, "out");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  write_confusion_csv(report, out_dir / "confusion.csv");
  write_heatmap_csv(report, out_dir / "heatmap.csv");
  std::ofstream out(out_dir / "per_scenario.csv", std::ios::binary);
  if (!out) throw IoError("cannot write per_scenario.csv");
  out << "scenario,acc,f1\n";
  char buf[96];
  for (const auto& s : report.per_scenario) {
    std::snprintf(buf, sizeof(buf), "%d,%.10g,%.10g", s.scenario_id, s.acc, s.f1);
    out << buf << '\n';
  }
}

}  // namespace wattmatch
