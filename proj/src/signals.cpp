// Copyright 2026 The WattMatch Authors
// SPDX-License-Identifier: Apache-2.0

#include "wattmatch/signals.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace wattmatch {

Waveform Waveform::make(std::vector<double> samples, double sample_rate_hz, SignalKind kind) {
  Waveform w{std::move(samples), sample_rate_hz, kind};
  w.validate();
  return w;
}

void Waveform::validate() const {
  if (!(sample_rate_hz > 0.0)) throw ArgumentError("waveform sample rate must be positive");
  for (double s : samples)
    if (!std::isfinite(s)) throw ArgumentError("waveform contains non-finite samples");
}

void FeatureSeries::validate() const {
  if (values.rows() == 0) throw ArgumentError("feature series needs at least one row");
  if (feature_names.size() != values.rows())
    throw ArgumentError("feature name count does not match row count");
  std::set<std::string> unique(feature_names.begin(), feature_names.end());
  if (unique.size() != feature_names.size())
    throw ArgumentError("feature names must be unique");
  if (!(rate_hz > 0.0)) throw ArgumentError("feature series rate must be positive");
  for (double v : values.data())
    if (!std::isfinite(v)) throw ArgumentError("feature series contains non-finite values");
}

FeatureSeries FeatureSeries::single_row(std::string name, std::vector<double> vals, double rate_hz) {
  FeatureSeries s;
  s.values = Matrix::row_vector(vals);
  s.feature_names = {std::move(name)};
  s.rate_hz = rate_hz;
  return s;
}

int FeatureSeries::row_index(const std::string& name) const {
  for (std::size_t i = 0; i < feature_names.size(); ++i)
    if (feature_names[i] == name) return static_cast<int>(i);
  return -1;
}

FeatureSeries FeatureSeries::select(const std::vector<std::string>& names) const {
  FeatureSeries out;
  out.rate_hz = rate_hz;
  out.values = Matrix(names.size(), length());
  out.feature_names = names;
  for (std::size_t r = 0; r < names.size(); ++r) {
    int src = row_index(names[r]);
    if (src < 0) throw ArgumentError("unknown feature name: " + names[r]);
    auto dst_row = out.values.row(r);
    auto src_row = values.row(static_cast<std::size_t>(src));
    std::copy(src_row.begin(), src_row.end(), dst_row.begin());
  }
  return out;
}

std::vector<Frame> frame_block(const FeatureSeries& series, std::size_t window_w, std::size_t hop) {
  const std::size_t t = series.length();
  if (window_w == 0) throw ArgumentError("window must be positive");
  if (hop == 0) throw ArgumentError("hop must be positive");
  if (window_w > t) throw EmptyInputError("window exceeds series length");

  std::vector<Frame> frames;
  for (std::size_t offset = 0; offset + window_w <= t; offset += hop) {
    Frame f;
    f.values = series.values.slice_cols(offset, window_w);
    f.start_index = offset;
    f.dc_removed = false;
    frames.push_back(std::move(f));
  }
  return frames;
}

Frame remove_dc(const Frame& frame) {
  if (frame.values.empty()) throw ArgumentError("cannot remove DC from an empty frame");
  Frame out = frame;
  const std::size_t w = out.values.cols();
  for (std::size_t r = 0; r < out.values.rows(); ++r) {
    auto row = out.values.row(r);
    double mean = 0.0;
    for (double v : row) mean += v;
    mean /= static_cast<double>(w);
    for (double& v : row) v -= mean;
  }
  out.dc_removed = true;
  return out;
}

namespace {

// rate / target as an exact small-integer factor, or 0 when fractional.
std::size_t integer_factor(double rate, double target) {
  double f = rate / target;
  double rounded = std::round(f);
  if (rounded >= 1.0 && std::abs(f - rounded) < 1e-9 * f) return static_cast<std::size_t>(rounded);
  return 0;
}

}  // namespace

FeatureSeries downsample(const FeatureSeries& series, double target_rate_hz) {
  if (!(target_rate_hz > 0.0)) throw ArgumentError("target rate must be positive");
  if (target_rate_hz > series.rate_hz + 1e-12)
    throw ArgumentError("downsample cannot increase the rate");

  const std::size_t t = series.length();
  const std::size_t f = series.feature_count();
  FeatureSeries out;
  out.feature_names = series.feature_names;
  out.rate_hz = target_rate_hz;

  if (std::size_t factor = integer_factor(series.rate_hz, target_rate_hz); factor != 0) {
    if (factor == 1) {
      out.values = series.values;
      return out;
    }
    const std::size_t n = t / factor;  // trailing partial block discarded
    out.values = Matrix(f, n);
    for (std::size_t r = 0; r < f; ++r) {
      auto src = series.values.row(r);
      for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j < factor; ++j) acc += src[k * factor + j];
        out.values.at(r, k) = acc / static_cast<double>(factor);
      }
    }
    return out;
  }

  // Fractional factor: linear interpolation on the source grid.
  if (t < 2) throw ArgumentError("fractional resampling needs at least two samples");
  const double step = series.rate_hz / target_rate_hz;  // source samples per output sample
  const std::size_t n = static_cast<std::size_t>(std::floor((t - 1) / step)) + 1;
  out.values = Matrix(f, n);
  for (std::size_t r = 0; r < f; ++r) {
    auto src = series.values.row(r);
    for (std::size_t k = 0; k < n; ++k) {
      double pos = k * step;
      std::size_t lo = static_cast<std::size_t>(pos);
      if (lo >= t - 1) {
        out.values.at(r, k) = src[t - 1];
        continue;
      }
      double frac = pos - static_cast<double>(lo);
      out.values.at(r, k) = src[lo] * (1.0 - frac) + src[lo + 1] * frac;
    }
  }
  return out;
}

}  // namespace wattmatch
