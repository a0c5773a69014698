// Copyright 2026 The WattMatch Authors
// SPDX-License-Identifier: Apache-2.0

#include "wattmatch/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wattmatch/features.hpp"
#include "wattmatch/rng.hpp"

namespace wattmatch {

namespace {

constexpr double kPi = std::numbers::pi;
// Fixed mains voltage distortion, shared by the renderer and the appliance
// models so that aggregated voltage registers stay consistent.
constexpr double kMainsHd3 = 0.004;
constexpr double kMainsHd5 = 0.003;
constexpr double kMainsHd7 = 0.002;

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

MonitorProfile MonitorProfile::acer() {
  MonitorProfile p;
  p.name = "acer";
  p.mean_power_w = 31.7;
  p.brightness_gain_w = 12.0;
  p.ripple_hd3 = 0.16;
  p.ripple_hd5 = 0.11;
  p.ripple_hd7 = 0.07;
  p.smoothing_tau_s = 0.04;
  p.displacement_rad = 0.22;
  p.displacement_swing_rad = 0.12;
  return p;
}

MonitorProfile MonitorProfile::iiyama() {
  MonitorProfile p;
  p.name = "iiyama";
  p.mean_power_w = 24.9;
  p.brightness_gain_w = 9.5;
  p.ripple_hd3 = 0.13;
  p.ripple_hd5 = 0.09;
  p.ripple_hd7 = 0.055;
  p.smoothing_tau_s = 0.09;
  p.displacement_rad = 0.18;
  p.displacement_swing_rad = 0.10;
  return p;
}

MonitorProfile MonitorProfile::by_name(const std::string& name) {
  if (name == "acer") return acer();
  if (name == "iiyama") return iiyama();
  throw ArgumentError("unknown monitor profile: " + name);
}

ChannelContent gen_channel_content(int channel_id, std::uint64_t seed, double duration_s) {
  if (!(duration_s > 0.0)) throw ArgumentError("content duration must be positive");
  auto rng = rng_stream(seed, stream::kContent, static_cast<std::uint64_t>(channel_id));
  std::uniform_real_distribution<double> level(0.12, 0.88);
  std::exponential_distribution<double> gap(1.0 / 4.0);  // mean scene length 4 s
  std::normal_distribution<double> step(0.0, 1.0);

  const double rate = 50.0;
  const auto n = static_cast<std::size_t>(std::llround(duration_s * rate));
  ChannelContent content;
  content.channel_id = channel_id;
  content.duration_s = duration_s;
  content.luma.resize(n);

  double scene_until = 0.0;
  double base = 0.5, drift = 0.0;
  const double dt = 1.0 / rate;
  for (std::size_t k = 0; k < n; ++k) {
    double t = static_cast<double>(k) * dt;
    if (t >= scene_until) {
      base = level(rng);
      drift = 0.0;
      scene_until = t + std::max(gap(rng), 0.4);
    }
    // Within-scene drift: a slow mean-reverting walk around the scene level.
    drift += dt * (-drift / 1.5) + 0.06 * std::sqrt(dt) * step(rng);
    content.luma[k] = clamp01(base + drift);
  }
  return content;
}

std::pair<Waveform, Waveform> render_monitor(const ChannelContent& content,
                                             const MonitorProfile& profile, std::uint64_t seed) {
  if (content.luma.empty()) throw ArgumentError("content has no luma trace");
  auto rng = rng_stream(seed, stream::kRender, static_cast<std::uint64_t>(content.channel_id),
                        std::hash<std::string>{}(profile.name));
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const double rate = kMonitorRateHz;
  const double dt = 1.0 / rate;
  const auto n = static_cast<std::size_t>(content.luma.size() * (rate / 50.0));
  const double v_amp = kMainsVrms * std::numbers::sqrt2;

  // Slow mains frequency wander within +-0.05 Hz.
  const double wander_phase = uniform(rng) * 2.0 * kPi;
  const double wander_rate = 0.011 + 0.004 * uniform(rng);
  const double phase0 = uniform(rng) * 2.0 * kPi;

  // SMPS harmonic phases are a fixed trait of the supply, not of the
  // recording.
  const double theta3 = 0.6, theta5 = 1.7, theta7 = 2.9;

  // Content changes the converter's operating point: a small displacement
  // offset tied to the channel, shared by every monitor playing it.
  const double disp_trait =
      (rng_stream(seed, stream::kContent, static_cast<std::uint64_t>(content.channel_id), 17)() %
           10000 /
       10000.0 -
       0.5) *
      0.12;

  const double i_nominal =
      profile.mean_power_w / (kMainsVrms * std::cos(profile.displacement_rad));
  const double noise_sigma = i_nominal * std::pow(10.0, -profile.noise_snr_db / 20.0);
  const double v_noise_sigma = v_amp * std::pow(10.0, -80.0 / 20.0);  // ADC floor

  std::vector<double> i_samples(n), v_samples(n);
  double phase = phase0;
  double p_state = profile.mean_power_w +
                   profile.brightness_gain_w * (content.luma.front() - 0.5);
  for (std::size_t k = 0; k < n; ++k) {
    double t = static_cast<double>(k) * dt;

    // Content-driven power target, linearly interpolated between 50 Hz ticks
    // and lowpassed by the input-capacitor time constant.
    double tick_pos = t * 50.0;
    auto tick = static_cast<std::size_t>(tick_pos);
    std::size_t tick_next = std::min(tick + 1, content.luma.size() - 1);
    tick = std::min(tick, content.luma.size() - 1);
    double frac = tick_pos - std::floor(tick_pos);
    double luma_now = content.luma[tick] * (1.0 - frac) + content.luma[tick_next] * frac;
    double p_target = profile.mean_power_w + profile.brightness_gain_w * (luma_now - 0.5);
    if (profile.smoothing_tau_s > 0.0)
      p_state += (dt / profile.smoothing_tau_s) * (p_target - p_state);
    else
      p_state = p_target;

    double luma_eff = clamp01((p_state - profile.mean_power_w) / profile.brightness_gain_w + 0.5);
    double psi =
        profile.displacement_rad + disp_trait + profile.displacement_swing_rad * (luma_eff - 0.5);
    double swing = 1.0 + profile.harmonic_swing * (2.0 * luma_eff - 1.0);
    double hd3 = profile.ripple_hd3 * swing;
    double hd5 = profile.ripple_hd5 * swing;
    double hd7 = profile.ripple_hd7 * swing;

    double f_now = 50.0 + 0.05 * std::sin(2.0 * kPi * wander_rate * t + wander_phase);
    phase += 2.0 * kPi * f_now * dt;

    v_samples[k] = v_amp * (std::sin(phase) + kMainsHd3 * std::sin(3.0 * phase) +
                            kMainsHd5 * std::sin(5.0 * phase) + kMainsHd7 * std::sin(7.0 * phase)) +
                   v_noise_sigma * gauss(rng);

    double i1 = std::numbers::sqrt2 * p_state / (kMainsVrms * std::cos(psi));
    double arg = phase - psi;
    i_samples[k] = i1 * (std::sin(arg) + hd3 * std::sin(3.0 * arg + theta3) +
                         hd5 * std::sin(5.0 * arg + theta5) + hd7 * std::sin(7.0 * arg + theta7)) +
                   noise_sigma * gauss(rng);
  }

  return {Waveform::make(std::move(i_samples), rate, SignalKind::current),
          Waveform::make(std::move(v_samples), rate, SignalKind::voltage)};
}

namespace {

// One appliance: a 50 Hz active-power trace plus fixed electrical character.
struct Appliance {
  std::vector<double> power;  // W per tick
  double psi;                 // displacement angle
  double hd3, hd5, hd7;
  double crest;
};

Appliance make_cycler(std::mt19937_64& rng, std::size_t ticks) {
  std::uniform_real_distribution<double> p_on(80.0, 140.0);
  std::uniform_real_distribution<double> period_s(20.0, 45.0);
  std::uniform_real_distribution<double> duty(0.3, 0.6);
  std::uniform_real_distribution<double> phase(0.0, 1.0);

  // Thermostatic duty cycle between the compressor level and a small idle
  // draw (controller electronics).
  Appliance a;
  double p = p_on(rng), period = period_s(rng) * 50.0, d = duty(rng);
  double idle = 12.0;
  double offset = phase(rng) * period;
  a.power.resize(ticks);
  for (std::size_t k = 0; k < ticks; ++k) {
    double pos = std::fmod(static_cast<double>(k) + offset, period) / period;
    a.power[k] = pos < d ? p : idle;
  }
  a.psi = 0.45;  // induction motor
  a.hd3 = 0.08;
  a.hd5 = 0.04;
  a.hd7 = 0.02;
  a.crest = 1.5;
  return a;
}

Appliance make_step_load(std::mt19937_64& rng, std::size_t ticks) {
  std::uniform_real_distribution<double> p_on(800.0, 2000.0);
  std::exponential_distribution<double> on_s(1.0 / 25.0);
  std::exponential_distribution<double> off_s(1.0 / 50.0);
  std::uniform_real_distribution<double> start(0.0, 1.0);

  Appliance a;
  a.power.assign(ticks, 0.0);
  double p = p_on(rng);
  bool on = start(rng) < 0.3;
  std::size_t k = 0;
  while (k < ticks) {
    double dur_s = std::max(on ? on_s(rng) : off_s(rng), 0.5);
    auto dur = static_cast<std::size_t>(dur_s * 50.0);
    std::size_t end = std::min(ticks, k + std::max<std::size_t>(dur, 1));
    if (on)
      for (std::size_t j = k; j < end; ++j) a.power[j] = p;
    k = end;
    on = !on;
  }
  a.psi = 0.02;  // resistive
  a.hd3 = 0.01;
  a.hd5 = 0.005;
  a.hd7 = 0.003;
  a.crest = 1.42;
  return a;
}

Appliance make_small_load(std::mt19937_64& rng, std::size_t ticks, bool always_on) {
  std::uniform_real_distribution<double> p_on(5.0, 60.0);
  std::uniform_real_distribution<double> psi(0.05, 0.55);
  std::uniform_real_distribution<double> hd(0.2, 0.8);
  std::exponential_distribution<double> toggle_s(1.0 / 30.0);
  std::uniform_real_distribution<double> start(0.0, 1.0);

  Appliance a;
  a.power.assign(ticks, 0.0);
  double p = p_on(rng);
  a.psi = psi(rng);
  a.hd3 = hd(rng);
  a.hd5 = a.hd3 * 0.5;
  a.hd7 = a.hd3 * 0.25;
  a.crest = 1.6 + a.hd3;

  if (always_on) {
    std::fill(a.power.begin(), a.power.end(), p);
    return a;
  }
  bool on = start(rng) < 0.5;
  std::size_t k = 0;
  while (k < ticks) {
    auto dur = static_cast<std::size_t>(std::max(toggle_s(rng), 1.0) * 50.0);
    std::size_t end = std::min(ticks, k + std::max<std::size_t>(dur, 1));
    if (on)
      for (std::size_t j = k; j < end; ++j) a.power[j] = p;
    k = end;
    on = !on;
  }
  return a;
}

}  // namespace

FeatureSeries gen_household_noise(std::uint64_t seed, double duration_s, int max_appliances) {
  if (max_appliances < 1) throw ArgumentError("max_appliances must be >= 1");
  if (!(duration_s > 0.0)) throw ArgumentError("noise duration must be positive");
  const auto ticks = static_cast<std::size_t>(std::llround(duration_s * 50.0));

  std::vector<Appliance> appliances;
  std::uint64_t idx = 1;

  if (max_appliances == 1) {
    // A lone thermostatic cycler: the power row alternates between its two
    // levels.
    auto rng = rng_stream(seed, stream::kNoise, idx++);
    appliances.push_back(make_cycler(rng, ticks));
  } else {
    auto rng = rng_stream(seed, stream::kNoise, 0);
    // The 60 W baseline keeps every tick above the occupied-house floor.
    std::uniform_real_distribution<double> base_psi(0.2, 0.4);
    Appliance base;
    base.power.assign(ticks, 60.0);
    base.psi = base_psi(rng);
    base.hd3 = 0.25;
    base.hd5 = 0.12;
    base.hd7 = 0.06;
    base.crest = 1.8;
    appliances.push_back(std::move(base));
  }
  int budget = max_appliances - static_cast<int>(appliances.size());
  int n_cyclers = std::clamp(max_appliances / 9, budget > 0 ? 1 : 0, 3);
  n_cyclers = std::min(n_cyclers, budget);
  budget -= n_cyclers;
  int n_steps = std::min(budget, std::clamp(max_appliances / 6, budget > 0 ? 1 : 0, 4));
  budget -= n_steps;
  int n_small = budget;
  for (int c = 0; c < n_cyclers; ++c, ++idx) {
    auto rng = rng_stream(seed, stream::kNoise, idx);
    appliances.push_back(make_cycler(rng, ticks));
  }
  for (int s = 0; s < n_steps; ++s, ++idx) {
    auto rng = rng_stream(seed, stream::kNoise, idx);
    appliances.push_back(make_step_load(rng, ticks));
  }
  for (int s = 0; s < n_small; ++s, ++idx) {
    auto rng = rng_stream(seed, stream::kNoise, idx);
    appliances.push_back(make_small_load(rng, ticks, s < n_small / 3));
  }

  const auto& names = feature_names();
  FeatureSeries out;
  out.feature_names.assign(names.begin(), names.end());
  out.rate_hz = 50.0;
  out.values = Matrix(kFeatureCount, ticks);

  const double v_thd = std::sqrt(kMainsHd3 * kMainsHd3 + kMainsHd5 * kMainsHd5 + kMainsHd7 * kMainsHd7);
  for (std::size_t k = 0; k < ticks; ++k) {
    double p_sum = 0.0, q_sum = 0.0, s_sum = 0.0, i_sum = 0.0;
    double w_crest = 0.0, w_phi = 0.0, w_thd = 0.0, w_hd3 = 0.0, w_hd5 = 0.0, w_hd7 = 0.0;
    for (const auto& a : appliances) {
      double p = a.power[k];
      if (p <= 0.0) continue;
      double q = p * std::tan(a.psi);
      double s_fund = std::hypot(p, q);
      double thd = std::sqrt(a.hd3 * a.hd3 + a.hd5 * a.hd5 + a.hd7 * a.hd7);
      double s = s_fund * std::sqrt(1.0 + thd * thd);  // harmonic current adds to S
      p_sum += p;
      q_sum += q;
      s_sum += s;
      i_sum += s / kMainsVrms;
      w_crest += a.crest * p;
      w_phi += a.psi * p;
      w_thd += thd * p;
      w_hd3 += a.hd3 * p;
      w_hd5 += a.hd5 * p;
      w_hd7 += a.hd7 * p;
    }
    auto& m = out.values;
    m.at(feat::v_peak, k) = kMainsVrms * std::numbers::sqrt2;
    m.at(feat::i_frms, k) = i_sum;
    m.at(feat::v_frms, k) = kMainsVrms;
    m.at(feat::i, k) = i_sum;
    m.at(feat::v, k) = kMainsVrms;
    m.at(feat::p, k) = p_sum;
    m.at(feat::f, k) = 50.0;
    m.at(feat::q, k) = q_sum;
    m.at(feat::s, k) = s_sum;
    m.at(feat::v_thd, k) = v_thd;
    m.at(feat::v_hd3, k) = kMainsHd3;
    m.at(feat::v_hd5, k) = kMainsHd5;
    m.at(feat::v_hd7, k) = kMainsHd7;
    if (p_sum > 0.0) {
      m.at(feat::i_crest, k) = w_crest / p_sum;
      m.at(feat::phi, k) = w_phi / p_sum;
      m.at(feat::i_thd, k) = w_thd / p_sum;
      m.at(feat::i_hd3, k) = w_hd3 / p_sum;
      m.at(feat::i_hd5, k) = w_hd5 / p_sum;
      m.at(feat::i_hd7, k) = w_hd7 / p_sum;
    }
  }
  return out;
}

FeatureSeries gen_idle_signal(std::size_t length) {
  const auto& names = feature_names();
  FeatureSeries out;
  out.feature_names.assign(names.begin(), names.end());
  out.rate_hz = 50.0;
  out.values = Matrix(kFeatureCount, length, 0.0);
  for (std::size_t k = 0; k < length; ++k) {
    out.values.at(feat::v_peak, k) = kMainsVrms * std::numbers::sqrt2;
    out.values.at(feat::v_frms, k) = kMainsVrms;
    out.values.at(feat::v, k) = kMainsVrms;
    out.values.at(feat::f, k) = 50.0;
  }
  return out;
}

double trace_correlation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty()) throw ArgumentError("correlation needs equal non-empty traces");
  double ma = 0.0, mb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ma += a[k];
    mb += b[k];
  }
  ma /= static_cast<double>(a.size());
  mb /= static_cast<double>(a.size());
  double num = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    num += (a[k] - ma) * (b[k] - mb);
    va += (a[k] - ma) * (a[k] - ma);
    vb += (b[k] - mb) * (b[k] - mb);
  }
  if (va <= 0.0 || vb <= 0.0) return 0.0;
  return num / std::sqrt(va * vb);
}

Corpus build_corpus(const CorpusParams& params, const MonitorProfile& profile) {
  if (params.channels < 1) throw ArgumentError("corpus needs at least one channel");
  if (params.scenarios < 1) throw ArgumentError("corpus needs at least one scenario");

  // Luma traces first; on a correlation violation the later channel is
  // regenerated from a bumped substream until the set separates.
  std::vector<ChannelContent> contents;
  for (int ch = 1; ch <= params.channels; ++ch) {
    std::uint64_t retry = 0;
    for (;;) {
      ChannelContent candidate = gen_channel_content(
          ch + static_cast<int>(retry) * 10000, params.seed, params.duration_s);
      candidate.channel_id = ch;
      bool ok = true;
      for (const auto& existing : contents)
        if (std::abs(trace_correlation(existing.luma, candidate.luma)) >= 0.5) ok = false;
      if (ok) {
        contents.push_back(std::move(candidate));
        break;
      }
      ++retry;
      if (retry > 50) throw ArgumentError("could not decorrelate channel contents");
    }
  }

  Corpus corpus;
  for (const auto& content : contents) {
    auto [i_wave, v_wave] = render_monitor(content, profile, params.seed);
    Corpus::Channel ch;
    ch.channel_id = content.channel_id;
    ch.series = extract_series(i_wave, v_wave);
    corpus.channels.push_back(std::move(ch));
  }
  if (params.with_noise) {
    corpus.noise = gen_household_noise(params.seed, params.duration_s * params.scenarios,
                                       params.max_appliances);
    corpus.has_noise = true;
  }
  return corpus;
}

}  // namespace wattmatch
