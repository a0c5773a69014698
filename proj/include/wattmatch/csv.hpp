// Copyright 2026 The WattMatch Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WATTMATCH_CSV_HPP
#define WATTMATCH_CSV_HPP

#include <filesystem>
#include <utility>

#include "wattmatch/signals.hpp"

namespace wattmatch {

// File format: one header row "t,<name1>,<name2>,..."; the time column is
// seconds; plain decimal floats, comma separator, '.' decimal point, UTF-8,
// LF line endings.

void write_series_csv(const FeatureSeries& series, const std::filesystem::path& path);
FeatureSeries read_series_csv(const std::filesystem::path& path);

/// Raw recordings as "t,i,v" at the waveform rate (amperes / volts).
void write_waveform_csv(const Waveform& current, const Waveform& voltage,
                        const std::filesystem::path& path);
std::pair<Waveform, Waveform> read_waveform_csv(const std::filesystem::path& path);

}  // namespace wattmatch

#endif
