// Copyright 2026 The WattMatch Authors
// SPDX-License-Identifier: Apache-2.0

#include "wattmatch/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace wattmatch {

namespace {

void append_double(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  out += buf;
}

struct Table {
  std::vector<std::string> columns;       // without the leading "t"
  std::vector<double> times;
  std::vector<std::vector<double>> rows;  // per column
};

Table read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw IoError("empty file: " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();

  Table table;
  {
    std::stringstream header(line);
    std::string cell;
    bool first = true;
    while (std::getline(header, cell, ',')) {
      if (first) {
        if (cell != "t") throw IoError(path.string() + ": first column must be 't'");
        first = false;
        continue;
      }
      table.columns.push_back(cell);
    }
    if (first) throw IoError(path.string() + ": missing header");
  }
  if (table.columns.empty()) throw IoError(path.string() + ": no value columns");
  table.rows.resize(table.columns.size());

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const char* p = line.c_str();
    char* end = nullptr;
    double t = std::strtod(p, &end);
    if (end == p) throw IoError(path.string() + ": bad time value at line " + std::to_string(lineno));
    table.times.push_back(t);
    p = end;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (*p != ',')
        throw IoError(path.string() + ": wrong column count at line " + std::to_string(lineno));
      ++p;
      double v = std::strtod(p, &end);
      if (end == p)
        throw IoError(path.string() + ": bad value at line " + std::to_string(lineno));
      table.rows[c].push_back(v);
      p = end;
    }
  }
  if (table.times.empty()) throw IoError(path.string() + ": no data rows");
  return table;
}

double infer_rate(const std::vector<double>& times, const std::filesystem::path& path) {
  if (times.size() < 2) return 50.0;  // single row: assume the nominal rate
  double span = times.back() - times.front();
  if (!(span > 0.0)) throw IoError(path.string() + ": time column must increase");
  double rate = static_cast<double>(times.size() - 1) / span;
  // Timestamps are written with finite precision; snap to the integer rate
  // they encode so that files of different lengths agree exactly.
  double snapped = std::round(rate);
  if (snapped >= 1.0 && std::abs(rate - snapped) < 1e-6 * rate) return snapped;
  return rate;
}

void write_table(const std::filesystem::path& path, const std::vector<std::string>& columns,
                 double rate_hz, const std::vector<std::span<const double>>& rows,
                 std::size_t length) {
  std::ofstream out(path, std::ios::binary);  // binary: keep LF endings everywhere
  if (!out) throw IoError("cannot write " + path.string());

  std::string buf = "t";
  for (const auto& c : columns) {
    buf += ',';
    buf += c;
  }
  buf += '\n';
  for (std::size_t k = 0; k < length; ++k) {
    append_double(buf, static_cast<double>(k) / rate_hz);
    for (const auto& row : rows) {
      buf += ',';
      append_double(buf, row[k]);
    }
    buf += '\n';
    if (buf.size() > (1u << 20)) {
      out << buf;
      buf.clear();
    }
  }
  out << buf;
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

void write_series_csv(const FeatureSeries& series, const std::filesystem::path& path) {
  series.validate();
  std::vector<std::span<const double>> rows;
  for (std::size_t r = 0; r < series.feature_count(); ++r) rows.push_back(series.values.row(r));
  write_table(path, series.feature_names, series.rate_hz, rows, series.length());
}

FeatureSeries read_series_csv(const std::filesystem::path& path) {
  Table table = read_table(path);
  FeatureSeries s;
  s.feature_names = table.columns;
  s.rate_hz = infer_rate(table.times, path);
  s.values = Matrix(table.columns.size(), table.times.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    auto dst = s.values.row(r);
    std::copy(table.rows[r].begin(), table.rows[r].end(), dst.begin());
  }
  s.validate();
  return s;
}

void write_waveform_csv(const Waveform& current, const Waveform& voltage,
                        const std::filesystem::path& path) {
  current.validate();
  voltage.validate();
  if (current.samples.size() != voltage.samples.size())
    throw ArgumentError("current/voltage length mismatch");
  if (current.sample_rate_hz != voltage.sample_rate_hz)
    throw ArgumentError("current/voltage rate mismatch");
  std::vector<std::span<const double>> rows{current.samples, voltage.samples};
  write_table(path, {"i", "v"}, current.sample_rate_hz, rows, current.samples.size());
}

std::pair<Waveform, Waveform> read_waveform_csv(const std::filesystem::path& path) {
  Table table = read_table(path);
  if (table.columns.size() != 2 || table.columns[0] != "i" || table.columns[1] != "v")
    throw IoError(path.string() + ": expected columns t,i,v");
  double rate = infer_rate(table.times, path);
  Waveform i = Waveform::make(std::move(table.rows[0]), rate, SignalKind::current);
  Waveform v = Waveform::make(std::move(table.rows[1]), rate, SignalKind::voltage);
  return {std::move(i), std::move(v)};
}

}  // namespace wattmatch
