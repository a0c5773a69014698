// Copyright 2026 The WattMatch Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WATTMATCH_FEATURES_HPP
#define WATTMATCH_FEATURES_HPP

#include <array>
#include <span>
#include <string>

#include "wattmatch/signals.hpp"

namespace wattmatch {

inline constexpr std::size_t kFeatureCount = 19;
inline constexpr double kNominalLineHz = 50.0;
// THD sums harmonic bins 2..13; bin 13 stays clear of the Nyquist margin of a
// 160-sample cycle.
inline constexpr std::size_t kHarmonicLimit = 13;

// Fixed row order for every extracted FeatureSeries: four statistical
// registers first, then the fifteen electrical ones.
namespace feat {
inline constexpr std::size_t v_peak = 0;   // peak voltage (V)
inline constexpr std::size_t i_frms = 1;   // rms current register (A)
inline constexpr std::size_t v_frms = 2;   // rms voltage register (V)
inline constexpr std::size_t i_crest = 3;  // current crest factor
inline constexpr std::size_t i = 4;        // current (A, rms)
inline constexpr std::size_t v = 5;        // voltage (V, rms)
inline constexpr std::size_t p = 6;        // active power (W)
inline constexpr std::size_t f = 7;        // line frequency (Hz)
inline constexpr std::size_t q = 8;        // reactive power (var, signed)
inline constexpr std::size_t s = 9;        // apparent power (VA)
inline constexpr std::size_t phi = 10;     // load angle (rad)
inline constexpr std::size_t i_thd = 11;
inline constexpr std::size_t v_thd = 12;
inline constexpr std::size_t i_hd3 = 13;
inline constexpr std::size_t i_hd5 = 14;
inline constexpr std::size_t i_hd7 = 15;
inline constexpr std::size_t v_hd3 = 16;
inline constexpr std::size_t v_hd5 = 17;
inline constexpr std::size_t v_hd7 = 18;
}  // namespace feat

const std::array<std::string, kFeatureCount>& feature_names();
int feature_index(const std::string& name);              // -1 if unknown
bool is_electrical_feature(std::size_t index);           // false for indices 0..3

struct CycleFeatures {
  std::array<double, kFeatureCount> values{};
  /// Set when a ratio denominator (rms or fundamental amplitude) was zero and
  /// the dependent features were forced to 0.
  bool degenerate = false;

  double operator[](std::size_t idx) const { return values[idx]; }
};

/// One feature vector from one electrical cycle of raw current and voltage.
/// Cycle length must be round(sample_rate_hz / 50), e.g. 160 samples at 8 kHz.
CycleFeatures extract_cycle(std::span<const double> i_cycle, std::span<const double> v_cycle,
                            double sample_rate_hz);

/// Consecutive non-overlapping cycles mapped through extract_cycle; the
/// output rate is the nominal line frequency. Trailing partial cycles are
/// discarded.
FeatureSeries extract_series(const Waveform& current, const Waveform& voltage);

}  // namespace wattmatch

#endif
