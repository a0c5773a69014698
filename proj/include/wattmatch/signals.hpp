// Copyright 2026 The WattMatch Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WATTMATCH_SIGNALS_HPP
#define WATTMATCH_SIGNALS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "wattmatch/matrix.hpp"

namespace wattmatch {

enum class SignalKind { current, voltage, power };

/// Raw samples at a fixed rate (amperes, volts or watts).
struct Waveform {
  std::vector<double> samples;
  double sample_rate_hz = 0.0;
  SignalKind kind = SignalKind::power;

  static Waveform make(std::vector<double> samples, double sample_rate_hz, SignalKind kind);

  /// Throws ArgumentError on non-positive rate or non-finite samples.
  void validate() const;
};

/// F x T matrix of per-cycle features with named rows; the nominal rate is
/// one vector per electrical cycle (50 Hz).
struct FeatureSeries {
  Matrix values;  // F x T
  std::vector<std::string> feature_names;
  double rate_hz = 50.0;

  std::size_t feature_count() const { return values.rows(); }
  std::size_t length() const { return values.cols(); }

  /// Throws ArgumentError unless F >= 1, names match rows and are unique,
  /// rate > 0 and all values are finite.
  void validate() const;

  static FeatureSeries single_row(std::string name, std::vector<double> vals, double rate_hz);

  int row_index(const std::string& name) const;  // -1 if absent
  /// Row subset in the requested order; unknown names throw ArgumentError.
  FeatureSeries select(const std::vector<std::string>& names) const;
};

/// Windowed F x W slice of a series.
struct Frame {
  Matrix values;  // F x W
  std::size_t start_index = 0;
  bool dc_removed = false;
};

/// Frames at offsets 0, hop, 2*hop, ...; a trailing partial window is
/// discarded. Throws EmptyInputError when window_w exceeds the series length
/// and ArgumentError for window_w == 0 or hop == 0.
std::vector<Frame> frame_block(const FeatureSeries& series, std::size_t window_w, std::size_t hop);

/// Subtracts the arithmetic mean of each row. Idempotent.
Frame remove_dc(const Frame& frame);

/// Rate reduction: block averaging for integer factors, linear-interpolation
/// resampling otherwise. Upsampling requests throw ArgumentError.
FeatureSeries downsample(const FeatureSeries& series, double target_rate_hz);

inline constexpr std::size_t kDefaultWindow = 3000;  // one minute at 50 Hz
inline constexpr std::size_t kDeskWindow = 300;      // desk-scale default

}  // namespace wattmatch

#endif
