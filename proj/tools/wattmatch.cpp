// Copyright 2026 The WattMatch Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Everything goes through the C API of the shared
// library; flags map onto configuration keys with precedence
// flags > config file > defaults. Exit codes: 0 success, 1 internal error,
// 2 user/config error.

#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wattmatch/wattmatch.h"

namespace {

struct ConfigDeleter {
  void operator()(wm_config* cfg) const { wm_config_free(cfg); }
};
using ConfigPtr = std::unique_ptr<wm_config, ConfigDeleter>;

struct CommandSpec {
  std::string config_file;
  std::vector<std::pair<std::string, std::string>> overrides;
};

int exit_code(wm_status status) {
  switch (status) {
    case WM_OK:
      return 0;
    case WM_ERR_INTERNAL:
      return 1;
    default:
      return 2;  // argument / domain / io / config: the user can fix these
  }
}

int fail(wm_status status) {
  std::fprintf(stderr, "wattmatch: %s error: %s\n", wm_status_name(status), wm_last_error());
  return exit_code(status);
}

ConfigPtr build_config(const CommandSpec& spec, wm_status* status) {
  wm_config* raw = nullptr;
  *status = wm_config_new(&raw);
  if (*status != WM_OK) return nullptr;
  ConfigPtr cfg(raw);
  if (!spec.config_file.empty()) {
    *status = wm_config_load(cfg.get(), spec.config_file.c_str());
    if (*status != WM_OK) return nullptr;
  }
  for (const auto& [key, value] : spec.overrides) {
    *status = wm_config_set(cfg.get(), key.c_str(), value.c_str());
    if (*status != WM_OK) return nullptr;
  }
  return cfg;
}

// Registers --<flag> writing config key <key> when provided.
void add_key_option(CLI::App* cmd, CommandSpec& spec, const std::string& flag,
                    const std::string& key, const std::string& help) {
  cmd->add_option_function<std::string>(
      flag, [&spec, key](const std::string& value) { spec.overrides.emplace_back(key, value); },
      help);
}

void add_common(CLI::App* cmd, CommandSpec& spec) {
  cmd->add_option("--config", spec.config_file, "key = value configuration file");
  add_key_option(cmd, spec, "--seed", "seed", "random seed (default 1)");
  add_key_option(cmd, spec, "--threads", "threads",
                 "worker threads (default: WATTMATCH_THREADS or all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TV-channel identification from aggregated smart-meter signals"};
  app.require_subcommand(1);
  app.set_version_flag("--version", wm_version());

  std::map<std::string, CommandSpec> specs;

  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  {
    auto& s = specs["synth"];
    add_common(synth, s);
    add_key_option(synth, s, "--out", "out", "output directory (required)");
    add_key_option(synth, s, "--channels", "channels", "channel count (default 20)");
    add_key_option(synth, s, "--duration", "duration", "seconds per channel (default 60)");
    add_key_option(synth, s, "--scenarios", "scenarios",
                   "noise scenarios the corpus must cover (default 59)");
    add_key_option(synth, s, "--max-appliances", "max_appliances",
                   "appliance cap for the noise model (default 26)");
    add_key_option(synth, s, "--profile", "profile", "monitor profile: acer | iiyama");
    add_key_option(synth, s, "--noise", "noise", "emit the noise corpus (default true)");
  }

  auto* extract = app.add_subcommand("extract", "raw t,i,v recording to feature CSV");
  {
    auto& s = specs["extract"];
    add_common(extract, s);
    add_key_option(extract, s, "--input", "input", "waveform CSV (required)");
    add_key_option(extract, s, "--out", "out", "output feature CSV (required)");
  }

  auto* rank = app.add_subcommand("rank", "ReliefF feature ranking over a corpus");
  {
    auto& s = specs["rank"];
    add_common(rank, s);
    add_key_option(rank, s, "--corpus", "corpus", "corpus directory (required)");
    add_key_option(rank, s, "--out", "out", "output directory (required)");
    add_key_option(rank, s, "--k-neighbors", "k_neighbors", "neighbors per class (default 10)");
    add_key_option(rank, s, "--sample-count", "sample_count",
                   "sampled instances, 0 = deterministic full sweep");
  }

  auto* match = app.add_subcommand("match", "score two series or identify against references");
  {
    auto& s = specs["match"];
    add_common(match, s);
    add_key_option(match, s, "--a", "a", "first series CSV (pair mode)");
    add_key_option(match, s, "--b", "b", "second series CSV (pair mode)");
    add_key_option(match, s, "--refs", "refs", "reference directory (identify mode)");
    add_key_option(match, s, "--input", "input", "series to identify (identify mode)");
    add_key_option(match, s, "--out", "out", "output directory (identify mode)");
    add_key_option(match, s, "--algorithm", "algorithm", "dtw | sdtw | gak | mvm");
    add_key_option(match, s, "--metric", "metric", "euclidean | manhattan | kl");
    add_key_option(match, s, "--gamma", "gamma", "sdtw/gak smoothing (default 5)");
    add_key_option(match, s, "--elasticity-v", "elasticity_v", "mvm link width (default 10)");
    add_key_option(match, s, "--features", "features", "feature subset, comma list");
    add_key_option(match, s, "--window", "window", "frame length (identify mode)");
    add_key_option(match, s, "--hop", "hop", "frame hop (default: window)");
    add_key_option(match, s, "--dc-remove", "dc_remove", "remove DC before pair matching");
  }

  auto* evaluate = app.add_subcommand("evaluate", "run protocol A, B or C and write reports");
  {
    auto& s = specs["evaluate"];
    add_common(evaluate, s);
    add_key_option(evaluate, s, "--corpus", "corpus", "corpus directory (required)");
    add_key_option(evaluate, s, "--refs-b", "refs_b", "second monitor's references (protocol C)");
    add_key_option(evaluate, s, "--out", "out", "output directory (required)");
    add_key_option(evaluate, s, "--protocol", "protocol", "A | B | C (default A)");
    add_key_option(evaluate, s, "--algorithm", "algorithm", "dtw | sdtw | gak | mvm");
    add_key_option(evaluate, s, "--metric", "metric", "euclidean | manhattan | kl");
    add_key_option(evaluate, s, "--gamma", "gamma", "sdtw/gak smoothing (default 5)");
    add_key_option(evaluate, s, "--elasticity-v", "elasticity_v", "mvm link width (default 10)");
    add_key_option(evaluate, s, "--window", "window", "frame length (default 300)");
    add_key_option(evaluate, s, "--hop", "hop", "frame hop (default: window)");
    add_key_option(evaluate, s, "--features", "features", "p | all | top8 | comma list");
    add_key_option(evaluate, s, "--scenarios", "scenarios", "noise scenarios (default 59)");
    add_key_option(evaluate, s, "--noise-scale", "noise_scale", "noise amplitude factor");
    add_key_option(evaluate, s, "--no-tv", "no_tv", "extra_class | threshold");
    add_key_option(evaluate, s, "--theta", "theta", "threshold cutoff or 'auto'");
    add_key_option(evaluate, s, "--full-scale", "full_scale", "use the 3000-sample window");
    add_key_option(evaluate, s, "--grid", "grid", "emit the parameter grid table first");
  }

  auto* report = app.add_subcommand("report", "re-emit CSV views of a saved report.json");
  {
    auto& s = specs["report"];
    add_common(report, s);
    add_key_option(report, s, "--input", "input", "report.json (required)");
    add_key_option(report, s, "--out", "out", "output directory (required)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  wm_status status = WM_OK;
  ConfigPtr cfg = build_config(specs[name], &status);
  if (!cfg) return fail(status);

  if (name == "synth") {
    status = wm_cmd_synth(cfg.get());
  } else if (name == "extract") {
    status = wm_cmd_extract(cfg.get());
  } else if (name == "rank") {
    status = wm_cmd_rank(cfg.get());
  } else if (name == "match") {
    double score = 0.0;
    status = wm_cmd_match(cfg.get(), &score);
    if (status == WM_OK) std::printf("%.10g\n", score);
  } else if (name == "evaluate") {
    status = wm_cmd_evaluate(cfg.get());
  } else if (name == "report") {
    status = wm_cmd_report(cfg.get());
  }

  if (status != WM_OK) return fail(status);
  return 0;
}
