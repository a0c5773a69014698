// Copyright 2026 The WattMatch Authors
// SPDX-License-Identifier: Apache-2.0

#include "wattmatch/wattmatch.h"

#include <string>

#include "wattmatch/commands.hpp"
#include "wattmatch/csv.hpp"
#include "wattmatch/errors.hpp"

struct wm_config {
  wattmatch::RunConfig impl;
};

struct wm_series {
  wattmatch::FeatureSeries impl;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

// Exceptions cross the C boundary as status codes; the message lands in the
// thread-local error slot.
template <typename Fn>
wm_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return WM_OK;
  } catch (const wattmatch::ConfigError& e) {
    set_error(e.what());
    return WM_ERR_CONFIG;
  } catch (const wattmatch::IoError& e) {
    set_error(e.what());
    return WM_ERR_IO;
  } catch (const wattmatch::DomainError& e) {
    set_error(e.what());
    return WM_ERR_DOMAIN;
  } catch (const wattmatch::ArgumentError& e) {
    set_error(e.what());
    return WM_ERR_ARGUMENT;
  } catch (const std::exception& e) {
    set_error(e.what());
    return WM_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return WM_ERR_INTERNAL;
  }
}

wm_status require(bool ok, const char* msg) {
  if (ok) return WM_OK;
  set_error(msg);
  return WM_ERR_ARGUMENT;
}

}  // namespace

extern "C" {

const char* wm_version(void) { return "0.1.0"; }

const char* wm_status_name(wm_status status) {
  switch (status) {
    case WM_OK: return "ok";
    case WM_ERR_ARGUMENT: return "argument";
    case WM_ERR_DOMAIN: return "domain";
    case WM_ERR_IO: return "io";
    case WM_ERR_CONFIG: return "config";
    case WM_ERR_INTERNAL: return "internal";
  }
  return "?";
}

const char* wm_last_error(void) { return g_last_error.c_str(); }

wm_status wm_config_new(wm_config** out) {
  if (wm_status s = require(out != nullptr, "null output pointer"); s != WM_OK) return s;
  return guarded([&] { *out = new wm_config(); });
}

void wm_config_free(wm_config* cfg) { delete cfg; }

wm_status wm_config_load(wm_config* cfg, const char* path) {
  if (wm_status s = require(cfg && path, "null argument"); s != WM_OK) return s;
  return guarded([&] { cfg->impl.load_file(path); });
}

wm_status wm_config_set(wm_config* cfg, const char* key, const char* value) {
  if (wm_status s = require(cfg && key && value, "null argument"); s != WM_OK) return s;
  return guarded([&] { cfg->impl.set(key, value); });
}

const char* wm_config_get(const wm_config* cfg, const char* key) {
  if (!cfg || !key || !cfg->impl.has(key)) return nullptr;
  return cfg->impl.entries().at(key).c_str();
}

wm_status wm_series_read_csv(const char* path, wm_series** out) {
  if (wm_status s = require(path && out, "null argument"); s != WM_OK) return s;
  return guarded([&] { *out = new wm_series{wattmatch::read_series_csv(path)}; });
}

wm_status wm_series_write_csv(const wm_series* series, const char* path) {
  if (wm_status s = require(series && path, "null argument"); s != WM_OK) return s;
  return guarded([&] { wattmatch::write_series_csv(series->impl, path); });
}

wm_status wm_series_shape(const wm_series* series, size_t* features, size_t* samples) {
  if (wm_status s = require(series != nullptr, "null series"); s != WM_OK) return s;
  if (features) *features = series->impl.feature_count();
  if (samples) *samples = series->impl.length();
  return WM_OK;
}

wm_status wm_series_rate(const wm_series* series, double* rate_hz) {
  if (wm_status s = require(series && rate_hz, "null argument"); s != WM_OK) return s;
  *rate_hz = series->impl.rate_hz;
  return WM_OK;
}

wm_status wm_series_feature_name(const wm_series* series, size_t index, const char** name) {
  if (wm_status s = require(series && name, "null argument"); s != WM_OK) return s;
  if (wm_status s = require(index < series->impl.feature_names.size(), "feature index out of range");
      s != WM_OK)
    return s;
  *name = series->impl.feature_names[index].c_str();
  return WM_OK;
}

wm_status wm_series_row(const wm_series* series, size_t index, const double** values,
                        size_t* count) {
  if (wm_status s = require(series && values && count, "null argument"); s != WM_OK) return s;
  if (wm_status s = require(index < series->impl.feature_count(), "feature index out of range");
      s != WM_OK)
    return s;
  auto row = series->impl.values.row(index);
  *values = row.data();
  *count = row.size();
  return WM_OK;
}

void wm_series_free(wm_series* series) { delete series; }

wm_status wm_match_series(const wm_series* a, const wm_series* b, const wm_match_spec* spec,
                          double* score) {
  if (wm_status s = require(a && b && spec && score, "null argument"); s != WM_OK) return s;
  return guarded([&] {
    wattmatch::MatchParams params;
    params.gamma = spec->gamma;
    params.elasticity_v = spec->elasticity_v;
    switch (spec->metric) {
      case WM_METRIC_EUCLIDEAN: params.metric = wattmatch::Metric::euclidean; break;
      case WM_METRIC_MANHATTAN: params.metric = wattmatch::Metric::manhattan; break;
      case WM_METRIC_KL: params.metric = wattmatch::Metric::kl; break;
      default: throw wattmatch::ArgumentError("unknown metric");
    }
    wattmatch::Algorithm algorithm;
    switch (spec->algorithm) {
      case WM_ALG_DTW: algorithm = wattmatch::Algorithm::dtw; break;
      case WM_ALG_SDTW: algorithm = wattmatch::Algorithm::sdtw; break;
      case WM_ALG_GAK: algorithm = wattmatch::Algorithm::gak; break;
      case WM_ALG_MVM: algorithm = wattmatch::Algorithm::mvm; break;
      default: throw wattmatch::ArgumentError("unknown algorithm");
    }
    *score = wattmatch::match_distance(algorithm, a->impl.values, b->impl.values, params);
  });
}

wm_status wm_cmd_synth(const wm_config* cfg) {
  if (wm_status s = require(cfg != nullptr, "null config"); s != WM_OK) return s;
  return guarded([&] { wattmatch::cmd_synth(cfg->impl); });
}

wm_status wm_cmd_extract(const wm_config* cfg) {
  if (wm_status s = require(cfg != nullptr, "null config"); s != WM_OK) return s;
  return guarded([&] { wattmatch::cmd_extract(cfg->impl); });
}

wm_status wm_cmd_rank(const wm_config* cfg) {
  if (wm_status s = require(cfg != nullptr, "null config"); s != WM_OK) return s;
  return guarded([&] { wattmatch::cmd_rank(cfg->impl); });
}

wm_status wm_cmd_match(const wm_config* cfg, double* score) {
  if (wm_status s = require(cfg != nullptr, "null config"); s != WM_OK) return s;
  return guarded([&] {
    double value = wattmatch::cmd_match(cfg->impl);
    if (score) *score = value;
  });
}

wm_status wm_cmd_evaluate(const wm_config* cfg) {
  if (wm_status s = require(cfg != nullptr, "null config"); s != WM_OK) return s;
  return guarded([&] { wattmatch::cmd_evaluate(cfg->impl); });
}

wm_status wm_cmd_report(const wm_config* cfg) {
  if (wm_status s = require(cfg != nullptr, "null config"); s != WM_OK) return s;
  return guarded([&] { wattmatch::cmd_report(cfg->impl); });
}

}  // extern "C"
