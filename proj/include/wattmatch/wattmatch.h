/*
 * Copyright 2026 The WattMatch Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Public C API of the wattmatch shared library.
 *
 * All functions return a wm_status; wm_last_error() carries the message of
 * the most recent failure on the calling thread. Objects are opaque handles,
 * created and destroyed by the library. The command entry points mirror the
 * CLI subcommands and are driven by a key-value configuration (see the
 * README for the key reference).
 */

#ifndef WATTMATCH_H
#define WATTMATCH_H

#include <stddef.h>

#if defined(_WIN32)
#define WM_API __declspec(dllexport)
#else
#define WM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wm_status {
  WM_OK = 0,
  WM_ERR_ARGUMENT = 1, /* bad shapes, sizes or parameter values */
  WM_ERR_DOMAIN = 2,   /* values outside an operation's domain */
  WM_ERR_IO = 3,       /* filesystem / parse failures */
  WM_ERR_CONFIG = 4,   /* missing or inconsistent configuration */
  WM_ERR_INTERNAL = 5
} wm_status;

typedef enum wm_algorithm {
  WM_ALG_DTW = 0,
  WM_ALG_SDTW = 1,
  WM_ALG_GAK = 2,
  WM_ALG_MVM = 3
} wm_algorithm;

typedef enum wm_metric {
  WM_METRIC_EUCLIDEAN = 0,
  WM_METRIC_MANHATTAN = 1,
  WM_METRIC_KL = 2
} wm_metric;

WM_API const char* wm_version(void);
WM_API const char* wm_status_name(wm_status status);

/* Message of the last failure on this thread; empty string if none. */
WM_API const char* wm_last_error(void);

/* ------------------------------------------------------------------ */
/* Configuration                                                        */

typedef struct wm_config wm_config;

WM_API wm_status wm_config_new(wm_config** out);
WM_API void wm_config_free(wm_config* cfg);
/* Loads "key = value" lines; later wm_config_set calls override. */
WM_API wm_status wm_config_load(wm_config* cfg, const char* path);
WM_API wm_status wm_config_set(wm_config* cfg, const char* key, const char* value);
/* Returns a pointer owned by the config, valid until the next mutation;
 * NULL when the key is absent. */
WM_API const char* wm_config_get(const wm_config* cfg, const char* key);

/* ------------------------------------------------------------------ */
/* Feature series                                                       */

typedef struct wm_series wm_series;

WM_API wm_status wm_series_read_csv(const char* path, wm_series** out);
WM_API wm_status wm_series_write_csv(const wm_series* series, const char* path);
WM_API wm_status wm_series_shape(const wm_series* series, size_t* features, size_t* samples);
WM_API wm_status wm_series_rate(const wm_series* series, double* rate_hz);
WM_API wm_status wm_series_feature_name(const wm_series* series, size_t index, const char** name);
/* Zero-copy view of one feature row, valid while the handle lives. */
WM_API wm_status wm_series_row(const wm_series* series, size_t index, const double** values,
                               size_t* count);
WM_API void wm_series_free(wm_series* series);

/* ------------------------------------------------------------------ */
/* Matching                                                             */

typedef struct wm_match_spec {
  wm_algorithm algorithm;
  wm_metric metric;
  double gamma;      /* sdtw / gak smoothing */
  int elasticity_v;  /* mvm link-width bound */
} wm_match_spec;

/* Distance-semantics score between two whole series (GAK maps to -log k). */
WM_API wm_status wm_match_series(const wm_series* a, const wm_series* b,
                                 const wm_match_spec* spec, double* score);

/* ------------------------------------------------------------------ */
/* Command entry points (CLI mirrors)                                   */

WM_API wm_status wm_cmd_synth(const wm_config* cfg);
WM_API wm_status wm_cmd_extract(const wm_config* cfg);
WM_API wm_status wm_cmd_rank(const wm_config* cfg);
/* score receives the pair-mode score (or the first frame's best score in
 * identify mode); pass NULL to ignore. */
WM_API wm_status wm_cmd_match(const wm_config* cfg, double* score);
WM_API wm_status wm_cmd_evaluate(const wm_config* cfg);
WM_API wm_status wm_cmd_report(const wm_config* cfg);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* WATTMATCH_H */
