// Copyright 2026 The WattMatch Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WATTMATCH_CONFIG_HPP
#define WATTMATCH_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace wattmatch {

/// Flat key-value run configuration. Files hold one `key = value` per line
/// ('#' starts a comment); CLI flags override file values which override
/// defaults.
class RunConfig {
 public:
  void load_file(const std::filesystem::path& path);
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_seed() const;  // key "seed", default 1
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<std::string> get_list(const std::string& key) const;  // comma-separated

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace wattmatch

#endif
