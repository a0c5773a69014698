// Copyright 2026 The WattMatch Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WATTMATCH_SYNTH_HPP
#define WATTMATCH_SYNTH_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wattmatch/signals.hpp"

namespace wattmatch {

inline constexpr double kMainsVrms = 230.0;
inline constexpr double kMonitorRateHz = 8000.0;  // render rate, 160 samples per cycle

/// Electrical behaviour of one monitor model.
struct MonitorProfile {
  std::string name;
  double mean_power_w = 30.0;
  double brightness_gain_w = 12.0;  // watts per unit luma across the full range
  double ripple_hd3 = 0.15;         // current harmonic ratios at mid luma
  double ripple_hd5 = 0.10;
  double ripple_hd7 = 0.06;
  double smoothing_tau_s = 0.04;    // input-capacitor lowpass on the power draw
  double displacement_rad = 0.22;   // fundamental current lag at mid luma
  double displacement_swing_rad = 0.12;
  double harmonic_swing = 0.2;      // +-20% harmonic modulation over the luma range
  double noise_snr_db = 60.0;

  static MonitorProfile acer();    // 31.7 W LCD test screen
  static MonitorProfile iiyama();  // 24.9 W LED reference screen
  static MonitorProfile by_name(const std::string& name);
};

/// Stand-in for broadcast content: a luma trace in [0, 1] at 50 Hz.
struct ChannelContent {
  int channel_id = 0;
  std::vector<double> luma;
  double duration_s = 0.0;
};

/// Deterministic per (channel_id, seed): piecewise-smooth luma with Poisson
/// scene cuts (mean gap 4 s) and within-scene drift.
ChannelContent gen_channel_content(int channel_id, std::uint64_t seed, double duration_s = 60.0);

/// Mains voltage plus the monitor current that delivers the content-driven
/// power at the profile's displacement angle and harmonic mix; 8 kHz output,
/// additive current noise at the profile's SNR.
std::pair<Waveform, Waveform> render_monitor(const ChannelContent& content,
                                             const MonitorProfile& profile, std::uint64_t seed);

/// Household appliance noise (thermostatic cyclers, step loads, small
/// always-on loads) as a full feature series at 50 Hz. None of the models
/// carries content-band modulation.
FeatureSeries gen_household_noise(std::uint64_t seed, double duration_s, int max_appliances);

/// The "monitor off" signal: zero draw, mains registers at their idle values.
FeatureSeries gen_idle_signal(std::size_t length);

struct CorpusParams {
  int channels = 20;
  double duration_s = 60.0;   // per channel
  int scenarios = 59;         // noise corpus holds scenarios * duration_s seconds
  int max_appliances = 26;
  std::uint64_t seed = 1;
  bool with_noise = true;
};

struct Corpus {
  struct Channel {
    int channel_id;
    FeatureSeries series;
  };
  std::vector<Channel> channels;
  FeatureSeries noise;  // empty when generated without noise
  bool has_noise = false;
};

/// Renders every channel through the profile and extracts features. Channel
/// luma traces are regenerated deterministically until all pairwise
/// correlations stay below 0.5.
Corpus build_corpus(const CorpusParams& params, const MonitorProfile& profile);

/// Pearson correlation of two equal-length traces.
double trace_correlation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace wattmatch

#endif
