// Copyright 2026 The WattMatch Authors
// SPDX-License-Identifier: Apache-2.0

#include "wattmatch/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include <json.hpp>

#include "wattmatch/csv.hpp"
#include "wattmatch/features.hpp"

namespace wattmatch {

namespace {

enum class AggRule { additive, mains, ratio };

AggRule rule_for(const std::string& name) {
  static const std::set<std::string> mains = {"v_peak", "v_frms", "v", "f"};
  static const std::set<std::string> ratio = {"i_crest", "phi",   "i_thd", "v_thd", "i_hd3",
                                              "i_hd5",   "i_hd7", "v_hd3", "v_hd5", "v_hd7"};
  if (mains.count(name)) return AggRule::mains;
  if (ratio.count(name)) return AggRule::ratio;
  return AggRule::additive;  // i, i_frms, p, q, s and any user-defined row
}

}  // namespace

void ReferenceSet::validate() const {
  if (references.empty()) throw ArgumentError("reference set must not be empty");
  const auto& first = references.front().series;
  int last_id = kNoTvChannel;
  for (const auto& entry : references) {
    if (entry.channel_id == kNoTvChannel)
      throw ArgumentError("channel id 0 is reserved for the no-TV class");
    // Ascending ids keep the argmin tie-break ("lowest channel id") a plain
    // first-minimum scan.
    if (entry.channel_id <= last_id)
      throw ArgumentError("reference channel ids must be unique and ascending");
    last_id = entry.channel_id;
    entry.series.validate();
    if (entry.series.feature_names != first.feature_names)
      throw ArgumentError("references must share one feature order");
    if (entry.series.rate_hz != first.rate_hz)
      throw ArgumentError("references must share one rate");
  }
}

std::vector<int> ReferenceSet::channel_ids() const {
  std::vector<int> ids;
  ids.reserve(references.size());
  for (const auto& e : references) ids.push_back(e.channel_id);
  return ids;
}

FeatureSeries aggregate(const FeatureSeries& tv, const std::vector<const FeatureSeries*>& others) {
  tv.validate();
  for (const auto* o : others) {
    o->validate();
    if (o->feature_names != tv.feature_names)
      throw ArgumentError("aggregate inputs must share one feature order");
    if (o->length() != tv.length()) throw ArgumentError("aggregate inputs must share one length");
    if (o->rate_hz != tv.rate_hz) throw ArgumentError("aggregate inputs must share one rate");
  }

  FeatureSeries out = tv;
  if (others.empty()) return out;

  const std::size_t t_len = tv.length();
  int p_row = tv.row_index("p");
  bool has_ratio = false;
  for (const auto& name : tv.feature_names)
    if (rule_for(name) == AggRule::ratio) has_ratio = true;
  if (has_ratio && p_row < 0)
    throw ArgumentError("ratio features need a 'p' row for power-weighted aggregation");

  // Active-power weights, clamped at zero; when nothing draws power the
  // target's ratio values stand.
  std::vector<double> total_power(t_len, 0.0);
  if (p_row >= 0) {
    for (std::size_t k = 0; k < t_len; ++k) {
      double acc = std::max(tv.values.at(static_cast<std::size_t>(p_row), k), 0.0);
      for (const auto* o : others)
        acc += std::max(o->values.at(static_cast<std::size_t>(p_row), k), 0.0);
      total_power[k] = acc;
    }
  }

  for (std::size_t r = 0; r < tv.feature_count(); ++r) {
    switch (rule_for(tv.feature_names[r])) {
      case AggRule::mains:
        break;  // keep the first source
      case AggRule::additive:
        for (std::size_t k = 0; k < t_len; ++k) {
          double acc = tv.values.at(r, k);
          for (const auto* o : others) acc += o->values.at(r, k);
          out.values.at(r, k) = acc;
        }
        break;
      case AggRule::ratio:
        for (std::size_t k = 0; k < t_len; ++k) {
          if (total_power[k] <= 0.0) continue;  // keep the target's value
          auto pr = static_cast<std::size_t>(p_row);
          double acc = tv.values.at(r, k) * std::max(tv.values.at(pr, k), 0.0);
          for (const auto* o : others)
            acc += o->values.at(r, k) * std::max(o->values.at(pr, k), 0.0);
          out.values.at(r, k) = acc / total_power[k];
        }
        break;
    }
  }
  return out;
}

NormalizationStats corpus_stats(const std::vector<const FeatureSeries*>& corpus) {
  if (corpus.empty()) throw ArgumentError("corpus_stats needs at least one series");
  const std::size_t f = corpus.front()->feature_count();
  NormalizationStats stats;
  stats.location.assign(f, 0.0);
  stats.scale.assign(f, 0.0);

  std::size_t total = 0;
  for (const auto* s : corpus) {
    if (s->feature_count() != f) throw ArgumentError("corpus series have unequal feature counts");
    total += s->length();
  }
  for (std::size_t r = 0; r < f; ++r) {
    double mean = 0.0;
    for (const auto* s : corpus)
      for (double v : s->values.row(r)) mean += v;
    mean /= static_cast<double>(total);
    double var = 0.0;
    for (const auto* s : corpus)
      for (double v : s->values.row(r)) var += (v - mean) * (v - mean);
    var /= static_cast<double>(total);
    stats.location[r] = mean;
    stats.scale[r] = std::sqrt(var);
    if (!(stats.scale[r] > 0.0)) {
      stats.scale[r] = 1.0;
      stats.flagged.push_back(r);
    }
  }
  return stats;
}

FeatureSeries normalize_features(const FeatureSeries& series, const NormalizationStats& stats) {
  series.validate();
  if (stats.location.size() != series.feature_count() ||
      stats.scale.size() != series.feature_count())
    throw ArgumentError("normalization stats do not match the feature count");

  FeatureSeries out = series;
  for (std::size_t r = 0; r < series.feature_count(); ++r) {
    double scale = stats.scale[r];
    if (!(scale > 0.0)) scale = 1.0;
    for (double& v : out.values.row(r)) v = (v - stats.location[r]) / scale;
  }
  return out;
}

int argmin_channel(const std::vector<double>& scores, const std::vector<int>& channel_ids,
                   NoTvPolicy policy, double theta) {
  if (scores.empty()) throw ArgumentError("argmin over empty scores");
  const bool extra = (policy == NoTvPolicy::extra_class);
  if (scores.size() != channel_ids.size() + (extra ? 1 : 0))
    throw ArgumentError("score/channel count mismatch");

  std::size_t best = 0;
  for (std::size_t m = 1; m < scores.size(); ++m)
    if (scores[m] < scores[best]) best = m;

  if (extra) return best < channel_ids.size() ? channel_ids[best] : kNoTvChannel;
  if (scores[best] > theta) return kNoTvChannel;
  return channel_ids[best];
}

Identification identify(const Frame& frame, const ReferenceSet& refs, Algorithm algorithm,
                        const MatchParams& params) {
  refs.validate();
  params.validate();
  if (!frame.dc_removed) throw ArgumentError("identify needs a DC-removed frame");
  if (frame.values.empty()) throw ArgumentError("identify needs a non-empty frame");
  const std::size_t w = frame.values.cols();
  const std::size_t f = frame.values.rows();
  if (f != refs.references.front().series.feature_count())
    throw ArgumentError("frame and references must share the feature subset");

  Identification out;
  out.frame_offset = frame.start_index;
  for (const auto& entry : refs.references) {
    if (frame.start_index + w > entry.series.length())
      throw ArgumentError("reference " + std::to_string(entry.channel_id) +
                          " is too short for the frame offset");
    Frame ref_frame;
    ref_frame.values = entry.series.values.slice_cols(frame.start_index, w);
    ref_frame.start_index = frame.start_index;
    ref_frame = remove_dc(ref_frame);
    out.scores.push_back(match_distance(algorithm, frame.values, ref_frame.values, params));
  }
  if (refs.policy == NoTvPolicy::extra_class) {
    Matrix flat(f, w, 0.0);  // the all-zero signature of "nothing playing"
    out.scores.push_back(match_distance(algorithm, frame.values, flat, params));
  }
  out.channel = argmin_channel(out.scores, refs.channel_ids(), refs.policy, refs.theta);
  return out;
}

void save_reference_set(const ReferenceSet& refs, const NormalizationStats& stats,
                        const std::filesystem::path& dir) {
  refs.validate();
  std::filesystem::create_directories(dir);

  nlohmann::ordered_json manifest;
  manifest["rate_hz"] = refs.references.front().series.rate_hz;
  manifest["feature_order"] = refs.references.front().series.feature_names;
  manifest["no_tv_policy"] = refs.policy == NoTvPolicy::extra_class ? "extra_class" : "threshold";
  manifest["theta"] = refs.theta;
  auto channels = nlohmann::ordered_json::array();
  for (const auto& entry : refs.references) {
    char name[32];
    std::snprintf(name, sizeof(name), "channel_%02d.csv", entry.channel_id);
    write_series_csv(entry.series, dir / name);
    channels.push_back({{"id", entry.channel_id}, {"file", name}});
  }
  manifest["channels"] = channels;
  if (!stats.location.empty()) {
    manifest["normalization"] = {{"location", stats.location}, {"scale", stats.scale}};
  }

  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) throw IoError("cannot write " + (dir / "manifest.json").string());
  out << manifest.dump(2) << '\n';
}

ReferenceSet load_reference_set(const std::filesystem::path& dir, NormalizationStats* stats) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw IoError("cannot open " + (dir / "manifest.json").string());
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad manifest in " + dir.string() + ": " + e.what());
  }

  ReferenceSet refs;
  if (manifest.value("no_tv_policy", "extra_class") == std::string("threshold"))
    refs.policy = NoTvPolicy::threshold;
  refs.theta = manifest.value("theta", 0.0);
  for (const auto& ch : manifest.at("channels")) {
    ReferenceSet::Entry entry;
    entry.channel_id = ch.at("id").get<int>();
    entry.series = read_series_csv(dir / ch.at("file").get<std::string>());
    refs.references.push_back(std::move(entry));
  }
  std::sort(refs.references.begin(), refs.references.end(),
            [](const auto& a, const auto& b) { return a.channel_id < b.channel_id; });
  refs.validate();

  if (stats) {
    stats->location.clear();
    stats->scale.clear();
    stats->flagged.clear();
    if (manifest.contains("normalization")) {
      stats->location = manifest["normalization"]["location"].get<std::vector<double>>();
      stats->scale = manifest["normalization"]["scale"].get<std::vector<double>>();
    }
  }
  return refs;
}

}  // namespace wattmatch
