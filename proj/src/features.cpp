// Copyright 2026 The WattMatch Authors
// SPDX-License-Identifier: Apache-2.0

#include "wattmatch/features.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace wattmatch {

const std::array<std::string, kFeatureCount>& feature_names() {
  static const std::array<std::string, kFeatureCount> names = {
      "v_peak", "i_frms", "v_frms", "i_crest", "i", "v", "p", "f", "q", "s",
      "phi", "i_thd", "v_thd", "i_hd3", "i_hd5", "i_hd7", "v_hd3", "v_hd5", "v_hd7"};
  return names;
}

int feature_index(const std::string& name) {
  const auto& names = feature_names();
  for (std::size_t k = 0; k < names.size(); ++k)
    if (names[k] == name) return static_cast<int>(k);
  return -1;
}

bool is_electrical_feature(std::size_t index) { return index >= 4 && index < kFeatureCount; }

namespace {

// Single-cycle DFT machinery shared across the cycles of one series; the
// basis tables depend only on the cycle length.
class CycleExtractor {
 public:
  CycleExtractor(std::size_t cycle_len, double sample_rate_hz)
      : c_(cycle_len), rate_(sample_rate_hz) {
    cos_.assign(kHarmonicLimit, std::vector<double>(c_));
    sin_.assign(kHarmonicLimit, std::vector<double>(c_));
    for (std::size_t n = 1; n <= kHarmonicLimit; ++n)
      for (std::size_t t = 0; t < c_; ++t) {
        double a = 2.0 * std::numbers::pi * static_cast<double>(n * t) / static_cast<double>(c_);
        cos_[n - 1][t] = std::cos(a);
        sin_[n - 1][t] = std::sin(a);
      }
  }

  CycleFeatures extract(std::span<const double> ic, std::span<const double> vc) const;

 private:
  struct Spectrum {
    std::array<std::complex<double>, kHarmonicLimit> bins{};  // bins 1..13
    double fundamental_amp() const { return std::abs(bins[0]); }
  };

  Spectrum dft(std::span<const double> x) const {
    Spectrum s;
    for (std::size_t n = 1; n <= kHarmonicLimit; ++n) {
      double re = 0.0, im = 0.0;
      const auto& cn = cos_[n - 1];
      const auto& sn = sin_[n - 1];
      for (std::size_t t = 0; t < c_; ++t) {
        re += x[t] * cn[t];
        im -= x[t] * sn[t];
      }
      s.bins[n - 1] = {re, im};
    }
    return s;
  }

  // Ratio of harmonic n to the fundamental; 0 with the degenerate flag when
  // the fundamental vanishes.
  static double hd(const Spectrum& s, std::size_t n, bool& degenerate) {
    double fund = s.fundamental_amp();
    if (fund <= 0.0) {
      degenerate = true;
      return 0.0;
    }
    return std::abs(s.bins[n - 1]) / fund;
  }

  static double thd(const Spectrum& s, bool& degenerate) {
    double fund = s.fundamental_amp();
    if (fund <= 0.0) {
      degenerate = true;
      return 0.0;
    }
    double acc = 0.0;
    for (std::size_t n = 2; n <= kHarmonicLimit; ++n) acc += std::norm(s.bins[n - 1]);
    return std::sqrt(acc) / fund;
  }

  double zero_crossing_freq(std::span<const double> vc) const {
    std::vector<double> crossings;
    for (std::size_t t = 1; t < c_; ++t) {
      double a = vc[t - 1], b = vc[t];
      if ((a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0)) {
        double frac = (b != a) ? a / (a - b) : 0.0;
        crossings.push_back(static_cast<double>(t - 1) + frac);
      }
    }
    if (crossings.size() < 2) return kNominalLineHz;
    double mean_gap = (crossings.back() - crossings.front()) /
                      static_cast<double>(crossings.size() - 1);
    if (!(mean_gap > 0.0)) return kNominalLineHz;
    return rate_ / (2.0 * mean_gap);  // successive crossings are half a period apart
  }

  std::size_t c_;
  double rate_;
  std::vector<std::vector<double>> cos_, sin_;
};

CycleFeatures CycleExtractor::extract(std::span<const double> ic, std::span<const double> vc) const {
  CycleFeatures out;
  auto& x = out.values;
  const double n = static_cast<double>(c_);

  double i_sq = 0.0, v_sq = 0.0, p_acc = 0.0, i_peak = 0.0, v_peak = 0.0;
  for (std::size_t t = 0; t < c_; ++t) {
    i_sq += ic[t] * ic[t];
    v_sq += vc[t] * vc[t];
    p_acc += ic[t] * vc[t];
    i_peak = std::max(i_peak, std::abs(ic[t]));
    v_peak = std::max(v_peak, std::abs(vc[t]));
  }
  const double i_rms = std::sqrt(i_sq / n);
  const double v_rms = std::sqrt(v_sq / n);
  const double active = p_acc / n;
  const double apparent = i_rms * v_rms;

  x[feat::v_peak] = v_peak;
  x[feat::i_frms] = i_rms;
  x[feat::v_frms] = v_rms;
  x[feat::i] = i_rms;
  x[feat::v] = v_rms;
  x[feat::p] = active;
  x[feat::s] = apparent;

  if (i_rms > 0.0) {
    x[feat::i_crest] = i_peak / i_rms;
  } else {
    x[feat::i_crest] = 0.0;
    out.degenerate = true;
  }
  if (v_rms <= 0.0) out.degenerate = true;

  Spectrum si = dft(ic);
  Spectrum sv = dft(vc);

  // Reactive power magnitude from S^2 - P^2 (distortion power included);
  // sign from the fundamental phase lag of current behind voltage.
  double q_mag = std::sqrt(std::max(apparent * apparent - active * active, 0.0));
  double sign = 1.0;
  if (std::abs(si.bins[0]) > 0.0 && std::abs(sv.bins[0]) > 0.0) {
    double lag = std::arg(sv.bins[0]) - std::arg(si.bins[0]);
    while (lag > std::numbers::pi) lag -= 2.0 * std::numbers::pi;
    while (lag <= -std::numbers::pi) lag += 2.0 * std::numbers::pi;
    if (lag < 0.0) sign = -1.0;
  }
  x[feat::q] = sign * q_mag;
  x[feat::phi] = (apparent > 0.0) ? std::atan2(x[feat::q], active) : 0.0;

  x[feat::f] = (v_rms > 0.0) ? zero_crossing_freq(vc) : kNominalLineHz;

  bool ratio_degenerate = false;
  x[feat::i_thd] = (i_rms > 0.0) ? thd(si, ratio_degenerate) : 0.0;
  x[feat::v_thd] = (v_rms > 0.0) ? thd(sv, ratio_degenerate) : 0.0;
  x[feat::i_hd3] = (i_rms > 0.0) ? hd(si, 3, ratio_degenerate) : 0.0;
  x[feat::i_hd5] = (i_rms > 0.0) ? hd(si, 5, ratio_degenerate) : 0.0;
  x[feat::i_hd7] = (i_rms > 0.0) ? hd(si, 7, ratio_degenerate) : 0.0;
  x[feat::v_hd3] = (v_rms > 0.0) ? hd(sv, 3, ratio_degenerate) : 0.0;
  x[feat::v_hd5] = (v_rms > 0.0) ? hd(sv, 5, ratio_degenerate) : 0.0;
  x[feat::v_hd7] = (v_rms > 0.0) ? hd(sv, 7, ratio_degenerate) : 0.0;
  if (ratio_degenerate) out.degenerate = true;

  return out;
}

std::size_t cycle_length(double sample_rate_hz) {
  auto c = static_cast<std::size_t>(std::llround(sample_rate_hz / kNominalLineHz));
  if (c < 4) throw ArgumentError("sample rate too low for per-cycle extraction");
  return c;
}

}  // namespace

CycleFeatures extract_cycle(std::span<const double> i_cycle, std::span<const double> v_cycle,
                            double sample_rate_hz) {
  if (!(sample_rate_hz > 0.0)) throw ArgumentError("sample rate must be positive");
  const std::size_t c = cycle_length(sample_rate_hz);
  if (i_cycle.size() != c || v_cycle.size() != c)
    throw ArgumentError("cycle length must be round(rate / 50)");
  for (std::size_t t = 0; t < c; ++t)
    if (!std::isfinite(i_cycle[t]) || !std::isfinite(v_cycle[t]))
      throw ArgumentError("cycle contains non-finite samples");
  return CycleExtractor(c, sample_rate_hz).extract(i_cycle, v_cycle);
}

FeatureSeries extract_series(const Waveform& current, const Waveform& voltage) {
  current.validate();
  voltage.validate();
  if (current.samples.size() != voltage.samples.size())
    throw ArgumentError("current/voltage length mismatch");
  if (current.sample_rate_hz != voltage.sample_rate_hz)
    throw ArgumentError("current/voltage rate mismatch");

  const std::size_t c = cycle_length(current.sample_rate_hz);
  const std::size_t cycles = current.samples.size() / c;
  if (cycles == 0) throw EmptyInputError("waveform shorter than one electrical cycle");

  const auto& names = feature_names();
  FeatureSeries out;
  out.feature_names.assign(names.begin(), names.end());
  out.rate_hz = kNominalLineHz;
  out.values = Matrix(kFeatureCount, cycles);

  CycleExtractor extractor(c, current.sample_rate_hz);
  for (std::size_t k = 0; k < cycles; ++k) {
    std::span<const double> ic{current.samples.data() + k * c, c};
    std::span<const double> vc{voltage.samples.data() + k * c, c};
    CycleFeatures cf = extractor.extract(ic, vc);
    for (std::size_t r = 0; r < kFeatureCount; ++r) out.values.at(r, k) = cf.values[r];
  }
  return out;
}

}  // namespace wattmatch
