// Copyright 2026 The WattMatch Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one pass/fail line per criterion. Exits non-zero when
// any criterion fails. Criteria 5, 6 and the whole-stack monotonicity
// harness run at a reduced desk scale (fewer channels, shorter clips) so a
// single core finishes in minutes; every tolerance is pinned here in code.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "prop.hpp"
#include "wattmatch/commands.hpp"
#include "wattmatch/csv.hpp"
#include "wattmatch/evaluation.hpp"
#include "wattmatch/features.hpp"
#include "wattmatch/ranking.hpp"
#include "wattmatch/synth.hpp"
#include "wattmatch/wattmatch.h"

using namespace wattmatch;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;
std::vector<std::string> g_notes;

void note(const std::string& line) { g_notes.push_back(line); }

bool criterion(int number, const std::string& name, const std::function<bool()>& body) {
  auto t0 = Clock::now();
  bool ok = false;
  std::string error;
  try {
    ok = body();
  } catch (const std::exception& e) {
    error = e.what();
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  std::printf("[%s] criterion %d: %s (%.1f s)\n", ok ? "PASS" : "FAIL", number, name.c_str(),
              secs);
  for (const auto& line : g_notes) std::printf("       %s\n", line.c_str());
  g_notes.clear();
  if (!error.empty()) std::printf("       exception: %s\n", error.c_str());
  if (!ok) ++g_failures;
  std::fflush(stdout);
  return ok;
}

bool expect(bool ok, const std::string& what) {
  if (!ok) note("failed: " + what);
  return ok;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string format(const char* fmt, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c);
  return buf;
}

// ---------------------------------------------------------------------
// Shared evaluation scaffolding

// inputs points into the World's own members, so Worlds live behind a
// unique_ptr and never move after bind().
struct World {
  Corpus corpus;
  ReferenceSet refs;
  EvalInputs inputs;

  void bind(bool with_noise) {
    inputs = EvalInputs{};
    for (const auto& ch : corpus.channels)
      inputs.test_signals.emplace_back(ch.channel_id, &ch.series);
    if (with_noise) inputs.noise = &corpus.noise;
    inputs.refs_same = &refs;
  }
};

std::unique_ptr<World> make_world(int channels, double duration_s, int scenarios,
                                  std::uint64_t seed, const MonitorProfile& profile,
                                  bool with_noise) {
  auto w = std::make_unique<World>();
  CorpusParams params;
  params.channels = channels;
  params.duration_s = duration_s;
  params.scenarios = scenarios;
  params.seed = seed;
  params.with_noise = with_noise;
  w->corpus = build_corpus(params, profile);
  for (auto& ch : w->corpus.channels) w->refs.references.push_back({ch.channel_id, ch.series});
  w->bind(with_noise);
  return w;
}

EvalParams protocol_params(Algorithm alg, Protocol protocol, std::size_t window, int scenarios,
                           double noise_scale) {
  EvalParams p;
  p.algorithm = alg;
  p.protocol = protocol;
  p.window = window;
  p.scenarios = scenarios;
  p.noise_scale = noise_scale;
  p.threads = 1;
  return p;
}

// Desk-scale robustness study: 4 channels + no-TV, one 300-sample frame per
// signal, 8 noise scenarios, seeds 1..10. Macro one-vs-rest accuracy over C
// classes cannot drop below 1 - 2/C, so the [0.6, 0.9] calibration band of
// criterion 5 needs this small class count.
struct Study {
  std::vector<std::unique_ptr<World>> worlds;

  Study() {
    for (std::uint64_t seed = 1; seed <= 10; ++seed)
      worlds.push_back(make_world(4, 6.0, 8, seed, MonitorProfile::acer(), true));
  }

  double median_acc(Algorithm alg, double noise_scale) {
    std::vector<double> accs;
    for (const auto& w : worlds)
      accs.push_back(
          run_protocol(w->inputs, protocol_params(alg, Protocol::B, 300, 8, noise_scale)).acc);
    return median(accs);
  }
};

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double g_calibrated_scale = 0.03;  // set by criterion 5, reused by 6 and 9

// ---------------------------------------------------------------------
// Criterion bodies

bool oracle_exact() {
  auto t0 = Clock::now();
  bool ok = true;
  prop::for_each_case(9001, [&](prop::Gen& gen, int) {
    Matrix a = gen.matrix(1, static_cast<std::size_t>(gen.integer(1, 6)), -10, 10);
    Matrix b = gen.matrix(1, static_cast<std::size_t>(gen.integer(1, 6)), -10, 10);
    MatchParams p;
    p.metric = gen.integer(0, 1) ? Metric::manhattan : Metric::euclidean;
    ok &= expect(dtw(a, b, p.metric).value == brute_force_oracle(Algorithm::dtw, a, b, p).value,
                 "dtw != oracle");
  }, 500);
  prop::for_each_case(9002, [&](prop::Gen& gen, int) {
    const auto k = static_cast<std::size_t>(gen.integer(1, 4));
    const auto l = static_cast<std::size_t>(gen.integer(static_cast<int>(k), 7));
    Matrix q = gen.matrix(1, k, -10, 10);
    Matrix t = gen.matrix(1, l, -10, 10);
    MatchParams p;
    p.metric = Metric::manhattan;
    p.elasticity_v = gen.integer(1, 8);
    ok &= expect(mvm(q, t, p.elasticity_v, p.metric).value ==
                     brute_force_oracle(Algorithm::mvm, q, t, p).value,
                 "mvm != oracle");
  }, 500);
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  note(format("500 dtw + 500 mvm instances, exact match, %.2f s (< 10 s)", secs));
  return ok && secs < 10.0;
}

bool oracle_analytic() {
  bool ok = true;
  prop::for_each_case(9003, [&](prop::Gen& gen, int) {
    Matrix a = gen.matrix(1, static_cast<std::size_t>(gen.integer(1, 5)), -10, 10);
    Matrix b = gen.matrix(1, static_cast<std::size_t>(gen.integer(1, 5)), -10, 10);
    MatchParams p;
    p.metric = Metric::euclidean;
    p.gamma = gen.real(0.05, 50.0);

    double s_dp = sdtw(a, b, p.gamma, p.metric).value;
    double s_or = brute_force_oracle(Algorithm::sdtw, a, b, p).value;
    ok &= expect(std::abs(s_dp - s_or) <= 1e-9 * (1.0 + std::abs(s_or)), "sdtw != oracle");

    double g_dp = gak(a, b, p.gamma, p.metric).value;
    double g_or = brute_force_oracle(Algorithm::gak, a, b, p).value;
    ok &= expect(std::abs(g_dp - g_or) <= 1e-9 * (1.0 + std::abs(g_or)), "gak != oracle");

    double hard = dtw(a, b, p.metric).value;
    ok &= expect(sdtw(a, b, 0.0, p.metric).value == hard, "sdtw(0) != dtw bit-exactly");
    for (double gamma : {0.1, 1.0, 10.0})
      ok &= expect(sdtw(a, b, gamma, p.metric).value <= hard, "sdtw > dtw");
  }, 500);
  note("500 sdtw/gak instances vs enumeration at 1e-9; gamma->0 and bound checks");
  return ok;
}

bool feature_correctness() {
  bool ok = true;
  const std::size_t cycle = 160;
  auto tone = [&](double amp, double phase, int harmonic) {
    std::vector<double> out(cycle);
    for (std::size_t t = 0; t < cycle; ++t)
      out[t] = amp * std::sin(2.0 * std::numbers::pi * harmonic * static_cast<double>(t) /
                                  static_cast<double>(cycle) +
                              phase);
    return out;
  };

  {  // Pure sine identities at 1e-4.
    auto s = tone(1.0, 0.0, 1);
    CycleFeatures f = extract_cycle(s, s, 8000.0);
    ok &= expect(std::abs(f[feat::i_frms] - 1.0 / std::numbers::sqrt2) <= 1e-4, "rms != A/sqrt2");
    ok &= expect(std::abs(f[feat::i_crest] - std::numbers::sqrt2) <= 1e-4, "crest != sqrt2");
    ok &= expect(std::abs(f[feat::q]) <= 1e-4, "Q != 0");
  }

  prop::for_each_case(9004, [&](prop::Gen& gen, int) {
    double a1 = gen.real(0.2, 3.0);
    double r3 = gen.real(0.0, 0.4), r5 = gen.real(0.0, 0.3), r7 = gen.real(0.0, 0.2);
    auto i = tone(a1, gen.real(0.0, 2.0), 1);
    auto mix_in = [&](const std::vector<double>& x) {
      for (std::size_t t = 0; t < cycle; ++t) i[t] += x[t];
    };
    mix_in(tone(a1 * r3, gen.real(0.0, 6.28), 3));
    mix_in(tone(a1 * r5, gen.real(0.0, 6.28), 5));
    mix_in(tone(a1 * r7, gen.real(0.0, 6.28), 7));
    auto v = tone(325.0, 0.0, 1);
    CycleFeatures f = extract_cycle(i, v, 8000.0);
    ok &= expect(std::abs(f[feat::i_hd3] - r3) <= 1e-6, "iHD3 off");
    ok &= expect(std::abs(f[feat::i_hd5] - r5) <= 1e-6, "iHD5 off");
    ok &= expect(std::abs(f[feat::i_hd7] - r7) <= 1e-6, "iHD7 off");
    double thd = std::sqrt(r3 * r3 + r5 * r5 + r7 * r7);
    ok &= expect(std::abs(f[feat::i_thd] - thd) <= 1e-6, "iTHD off");
  }, 500);
  note("pure-sine identities at 1e-4; 500 harmonic injections at 1e-6");
  return ok;
}

bool protocol_a_reproduction() {
  auto t0 = Clock::now();
  auto world = make_world(20, 60.0, 1, 1, MonitorProfile::acer(), false);
  bool ok = true;
  for (Algorithm alg : {Algorithm::dtw, Algorithm::sdtw, Algorithm::gak, Algorithm::mvm}) {
    EvalReport r = run_protocol(world->inputs, protocol_params(alg, Protocol::A, 300, 1, 1.0));
    note(std::string(algorithm_name(alg)) + format(": acc=%.4f f1=%.4f", r.acc, r.f1));
    ok &= expect(r.acc == 1.0, std::string(algorithm_name(alg)) + " acc != 1.0");
    ok &= expect(r.f1 == 1.0, std::string(algorithm_name(alg)) + " f1 != 1.0");
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  note(format("20 channels + no-TV, W=300, %.1f s (< 300 s)", secs));
  return ok && secs < 300.0;
}

bool noise_robustness_ordering() {
  Study study;

  // Calibrate the noise scale until the 10-seed median dtw accuracy lands in
  // [0.6, 0.9]; accuracy falls as the scale grows.
  double lo = 1e-4, hi = 64.0;
  double scale = 0.03;
  double acc = study.median_acc(Algorithm::dtw, scale);
  for (int iter = 0; iter < 24 && (acc < 0.6 || acc > 0.9); ++iter) {
    if (acc > 0.9)
      lo = scale;
    else
      hi = scale;
    scale = std::sqrt(lo * hi);
    acc = study.median_acc(Algorithm::dtw, scale);
  }
  bool ok = expect(acc >= 0.6 && acc <= 0.9, "calibration left [0.6, 0.9]");
  g_calibrated_scale = scale;

  double mvm_acc = study.median_acc(Algorithm::mvm, scale);
  double gak_acc = study.median_acc(Algorithm::gak, scale);
  note(format("noise scale %.4f: median dtw=%.3f over 10 seeds", scale, acc));
  note(format("median mvm=%.3f gak=%.3f (need mvm >= dtw and mvm >= gak)", mvm_acc, gak_acc));
  ok &= expect(mvm_acc >= acc, "median mvm < median dtw");
  ok &= expect(mvm_acc >= gak_acc, "median mvm < median gak");
  return ok;
}

bool protocol_c_degradation() {
  std::vector<double> b_accs, c_accs;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto house = make_world(4, 6.0, 8, seed, MonitorProfile::acer(), true);
    auto server = make_world(4, 6.0, 8, seed, MonitorProfile::iiyama(), false);
    house->inputs.refs_other = &server->refs;

    b_accs.push_back(run_protocol(house->inputs, protocol_params(Algorithm::mvm, Protocol::B,
                                                                 300, 8, g_calibrated_scale))
                         .acc);
    c_accs.push_back(run_protocol(house->inputs, protocol_params(Algorithm::mvm, Protocol::C,
                                                                 300, 8, g_calibrated_scale))
                         .acc);
  }
  double b_med = median(b_accs), c_med = median(c_accs);
  note(format("mvm median: B=%.3f C=%.3f degradation=%.3f (<= 0.15)", b_med, c_med,
              b_med - c_med));
  bool ok = expect(c_med <= b_med, "ACC(C) > ACC(B)");
  ok &= expect(b_med - c_med <= 0.15, "degradation > 0.15");
  return ok;
}

bool metric_formulas() {
  bool ok = true;
  prop::for_each_case(9005, [&](prop::Gen& gen, int) {
    const auto n = static_cast<std::size_t>(gen.integer(2, 8));
    Confusion c(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
      c[i][i] = gen.integer(1, 30);
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) c[i][j] = gen.integer(0, 12);
    }
    // Direct per-class binarization, written out independently.
    double total = 0.0;
    for (const auto& row : c)
      for (auto v : row) total += static_cast<double>(v);
    double acc_ref = 0.0, f1_ref = 0.0;
    for (std::size_t cls = 0; cls < n; ++cls) {
      double tp = static_cast<double>(c[cls][cls]), fn = 0.0, fp = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != cls) {
          fn += static_cast<double>(c[cls][j]);
          fp += static_cast<double>(c[j][cls]);
        }
      double tn = total - tp - fn - fp;
      acc_ref += (tp + tn) / (tp + tn + fp + fn);
      f1_ref += (2.0 * tp) / (2.0 * tp + fn + fp);
    }
    acc_ref /= static_cast<double>(n);
    f1_ref /= static_cast<double>(n);
    ok &= expect(std::abs(accuracy(c) - acc_ref) <= 1e-12, "accuracy formula");
    ok &= expect(std::abs(f1_score(c) - f1_ref) <= 1e-12, "f1 formula");
  }, 20);

  // Rigged grid with a known optimum: a spiky channel self-identifies under
  // a small gamma but drifts to the faint reference when a huge gamma
  // averages over all alignments.
  const std::size_t len = 12;
  std::vector<double> spiky(len), faint(len);
  for (std::size_t k = 0; k < len; ++k) {
    spiky[k] = (k % 2 == 0) ? 10.0 : -10.0;
    faint[k] = 0.1 * std::sin(2.0 * std::numbers::pi * static_cast<double>(k) / 5.0);
  }
  FeatureSeries ch1 = FeatureSeries::single_row("p", spiky, 50.0);
  FeatureSeries ch2 = FeatureSeries::single_row("p", faint, 50.0);
  ReferenceSet refs;
  refs.references.push_back({1, ch1});
  refs.references.push_back({2, ch2});
  EvalInputs inputs;
  inputs.test_signals = {{1, &ch1}, {2, &ch2}};
  inputs.refs_same = &refs;
  EvalParams base = protocol_params(Algorithm::sdtw, Protocol::A, len, 2, 1.0);

  auto [best, table] = grid_search(inputs, base, {0.01, 1e6}, 0.5);
  ok &= expect(best == 0.01, "grid argmax missed the rigged optimum");
  ok &= expect(table.size() == 2 && table[0].acc > table[1].acc, "rig accuracies not ordered");
  auto [tied, tied_table] = grid_search(inputs, base, {0.01, 0.02}, 0.5);
  ok &= expect(tied == 0.01 && tied_table[0].acc == tied_table[1].acc, "tie not broken downward");
  note("20 confusion matrices vs direct per-class formulas at 1e-12; rigged grid argmax");
  return ok;
}

bool determinism() {
  fs::path corpus_dir = fs::temp_directory_path() / "wattmatch_acc_corpus";
  fs::remove_all(corpus_dir);
  RunConfig synth_cfg;
  synth_cfg.set("channels", "3");
  synth_cfg.set("duration", "2");
  synth_cfg.set("scenarios", "2");
  synth_cfg.set("seed", "6");
  synth_cfg.set("out", corpus_dir.string());
  cmd_synth(synth_cfg);

  auto evaluate = [&](const char* threads, const fs::path& out) -> std::uint64_t {
    wm_config* cfg = nullptr;
    if (wm_config_new(&cfg) != WM_OK) return 0;
    wm_config_set(cfg, "corpus", corpus_dir.string().c_str());
    wm_config_set(cfg, "out", out.string().c_str());
    wm_config_set(cfg, "protocol", "B");
    wm_config_set(cfg, "algorithm", "mvm");
    wm_config_set(cfg, "window", "50");
    wm_config_set(cfg, "scenarios", "2");
    wm_config_set(cfg, "seed", "6");
    wm_config_set(cfg, "threads", threads);
    wm_status status = wm_cmd_evaluate(cfg);
    wm_config_free(cfg);
    if (status != WM_OK) return 0;
    return fnv1a(slurp(out / "report.json"));
  };

  fs::path out1 = fs::temp_directory_path() / "wattmatch_acc_out1";
  fs::path out2 = fs::temp_directory_path() / "wattmatch_acc_out2";
  fs::remove_all(out1);
  fs::remove_all(out2);
  std::uint64_t h1 = evaluate("1", out1);
  std::uint64_t h2 = evaluate("4", out2);
  {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "report hash 1 thread: %016llx, 4 threads: %016llx",
                  static_cast<unsigned long long>(h1), static_cast<unsigned long long>(h2));
    note(buf);
  }
  bool ok = expect(h1 != 0 && h1 == h2, "thread count changed the report payload");
  fs::remove_all(corpus_dir);
  fs::remove_all(out1);
  fs::remove_all(out2);
  return ok;
}

// ---------------------------------------------------------------------
// Criterion 9: the per-module invariant battery.

int g_prop_failures = 0;

void property(const std::string& name, const std::function<bool()>& body) {
  bool ok = false;
  std::string error;
  try {
    ok = body();
  } catch (const std::exception& e) {
    error = e.what();
  }
  if (!ok) {
    ++g_prop_failures;
    std::string line = "property suite failed: " + name;
    if (!error.empty()) line += " (" + error + ")";
    note(line);
  }
}

bool signals_properties() {
  bool ok = true;
  prop::for_each_case(9101, [&](prop::Gen& gen, int) {
    const auto rows = static_cast<std::size_t>(gen.integer(1, 3));
    const auto len = static_cast<std::size_t>(gen.integer(6, 30));
    FeatureSeries s;
    s.values = gen.matrix(rows, len, -100, 100);
    for (std::size_t r = 0; r < rows; ++r) s.feature_names.push_back("f" + std::to_string(r));
    s.rate_hz = 50.0;
    FeatureSeries shifted = s;
    for (std::size_t r = 0; r < rows; ++r) {
      double c = gen.real(-5000, 5000);
      for (double& v : shifted.values.row(r)) v += c;
    }
    const auto w = static_cast<std::size_t>(gen.integer(2, static_cast<int>(len)));
    auto base = frame_block(s, w, w);
    auto moved = frame_block(shifted, w, w);
    for (std::size_t i = 0; i < base.size(); ++i) {
      Frame a = remove_dc(base[i]);
      Frame b = remove_dc(moved[i]);
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t k = 0; k < w; ++k)
          if (std::abs(a.values.at(r, k) - b.values.at(r, k)) >
              1e-12 + 1e-12 * std::abs(a.values.at(r, k)))
            ok = false;
    }
  });
  prop::for_each_case(9102, [&](prop::Gen& gen, int) {
    Frame f{gen.matrix(1, static_cast<std::size_t>(gen.integer(2, 40)), -1000, 1000), 0, false};
    Frame once = remove_dc(f);
    Frame twice = remove_dc(once);
    for (std::size_t k = 0; k < once.values.cols(); ++k)
      if (std::abs(twice.values.at(0, k) - once.values.at(0, k)) > 1e-12) ok = false;
  });
  prop::for_each_case(9103, [&](prop::Gen& gen, int) {
    const int factor = gen.integer(2, 10);
    const auto blocks = static_cast<std::size_t>(gen.integer(1, 20));
    FeatureSeries s = FeatureSeries::single_row(
        "p", gen.reals(blocks * static_cast<std::size_t>(factor), -50, 50), 50.0 * factor);
    FeatureSeries out = downsample(s, 50.0);
    double in_mean = 0.0, out_mean = 0.0;
    for (double v : s.values.row(0)) in_mean += v;
    for (double v : out.values.row(0)) out_mean += v;
    in_mean /= static_cast<double>(s.length());
    out_mean /= static_cast<double>(out.length());
    if (std::abs(in_mean - out_mean) > 1e-9 * (std::abs(in_mean) + 1.0)) ok = false;
  });
  return ok;
}

bool features_properties() {
  bool ok = true;
  const std::size_t cycle = 160;
  auto tone = [&](double amp, double phase, int harmonic) {
    std::vector<double> out(cycle);
    for (std::size_t t = 0; t < cycle; ++t)
      out[t] = amp * std::sin(2.0 * std::numbers::pi * harmonic * static_cast<double>(t) /
                                  static_cast<double>(cycle) +
                              phase);
    return out;
  };
  auto mix = [&](prop::Gen& gen) {
    auto i = tone(gen.real(0.2, 2.0), gen.real(0.0, 2.0), 1);
    auto h = tone(gen.real(0.0, 0.4), gen.real(0.0, 6.0), gen.integer(3, 7));
    for (std::size_t t = 0; t < cycle; ++t) i[t] += h[t];
    return i;
  };
  prop::for_each_case(9104, [&](prop::Gen& gen, int) {
    auto i = mix(gen);
    auto v = tone(325.0, 0.0, 1);
    double k = gen.real(0.1, 10.0);
    auto scaled = i;
    for (double& x : scaled) x *= k;
    CycleFeatures a = extract_cycle(i, v, 8000.0);
    CycleFeatures b = extract_cycle(scaled, v, 8000.0);
    for (std::size_t idx : {feat::i_frms, feat::p, feat::q, feat::s})
      if (std::abs(b[idx] - a[idx] * k) > 1e-9 * (1.0 + std::abs(a[idx] * k))) ok = false;
    for (std::size_t idx : {feat::i_crest, feat::i_thd, feat::i_hd5, feat::phi})
      if (std::abs(b[idx] - a[idx]) > 1e-9 * (1.0 + std::abs(a[idx]))) ok = false;
  });
  prop::for_each_case(9105, [&](prop::Gen& gen, int) {
    auto i = mix(gen);
    auto v = tone(gen.real(100.0, 400.0), 0.0, 1);
    CycleFeatures f = extract_cycle(i, v, 8000.0);
    double lhs = f[feat::s] * f[feat::s];
    double rhs = f[feat::p] * f[feat::p] + f[feat::q] * f[feat::q];
    if (std::abs(lhs - rhs) > 1e-9 * (1.0 + lhs)) ok = false;
  });
  prop::for_each_case(9106, [&](prop::Gen& gen, int) {
    auto i = mix(gen);
    auto v = tone(325.0, 0.0, 1);
    CycleFeatures a = extract_cycle(i, v, 8000.0);
    auto shifted = i;
    double dc = gen.real(-3.0, 3.0);
    for (double& x : shifted) x += dc;
    CycleFeatures b = extract_cycle(shifted, v, 8000.0);
    for (std::size_t idx : {feat::i_thd, feat::i_hd3, feat::i_hd5, feat::i_hd7})
      if (std::abs(a[idx] - b[idx]) > 1e-9) ok = false;
  });
  return ok;
}

bool matching_properties() {
  bool ok = true;
  prop::for_each_case(9107, [&](prop::Gen& gen, int) {
    Matrix a = gen.matrix(1, static_cast<std::size_t>(gen.integer(1, 10)), -5, 5);
    Matrix b = gen.matrix(1, static_cast<std::size_t>(gen.integer(1, 10)), -5, 5);
    if (std::abs(dtw(a, b, Metric::manhattan).value - dtw(b, a, Metric::manhattan).value) >
        1e-12)
      ok = false;
    Matrix x = gen.matrix(1, static_cast<std::size_t>(gen.integer(1, 10)), -5, 5);
    if (dtw(x, x, Metric::euclidean).value != 0.0) ok = false;
    if (mvm(x, x, 10, Metric::euclidean).value != 0.0) ok = false;
  });
  prop::for_each_case(9108, [&](prop::Gen& gen, int) {
    Matrix a = gen.matrix(1, static_cast<std::size_t>(gen.integer(2, 10)), -5, 5);
    Matrix b = gen.matrix(1, static_cast<std::size_t>(gen.integer(2, 10)), -5, 5);
    double g1 = gen.real(0.01, 5.0), g2 = g1 + gen.real(0.1, 10.0);
    double s1 = sdtw(a, b, g1, Metric::euclidean).value;
    double s2 = sdtw(a, b, g2, Metric::euclidean).value;
    if (s1 + 1e-9 * (1.0 + std::abs(s1)) < s2) ok = false;
    double scale = 0.0;
    CostMatrix c = cost_matrix(a, b, Metric::euclidean);
    for (double v : c.values.data()) scale += v;
    scale /= static_cast<double>(c.values.rows() * c.values.cols());
    if (scale > 0.0) {
      double hard = dtw(a, b, Metric::euclidean).value;
      if (std::abs(sdtw(a, b, 1e-4 * scale, Metric::euclidean).value - hard) > 1e-3 * scale)
        ok = false;
    }
    if (!(gak(a, b, gen.real(0.5, 10.0), Metric::euclidean).value > 0.0)) ok = false;
  });
  {  // Log-domain result stays finite at the full one-minute frame length.
    prop::Gen gen(9109);
    Matrix a = gen.matrix(1, 3000, -10, 10);
    Matrix b = gen.matrix(1, 3000, -10, 10);
    if (!std::isfinite(log_gak(a, b, 5.0, Metric::euclidean))) ok = false;
    if (!std::isfinite(log_gak(a, a, 1.0, Metric::euclidean))) ok = false;
  }
  prop::for_each_case(9110, [&](prop::Gen& gen, int) {
    const auto k = static_cast<std::size_t>(gen.integer(1, 6));
    const auto l = static_cast<std::size_t>(gen.integer(static_cast<int>(k), 10));
    Matrix q = gen.matrix(1, k, -5, 5);
    Matrix t = gen.matrix(1, l, -5, 5);
    double best_window = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s + k <= l; ++s) {
      double cost = 0.0;
      for (std::size_t i = 0; i < k; ++i) cost += std::abs(q.at(0, i) - t.at(0, s + i));
      best_window = std::min(best_window, cost);
    }
    if (mvm(q, t, static_cast<int>(1 + l - k), Metric::manhattan).value > best_window + 1e-12)
      ok = false;
  });
  prop::for_each_case(9111, [&](prop::Gen& gen, int) {
    Matrix a = gen.matrix(1, static_cast<std::size_t>(gen.integer(1, 5)), -5, 5);
    Matrix b = gen.matrix(1, static_cast<std::size_t>(gen.integer(1, 5)), -5, 5);
    MatchParams p;
    p.gamma = gen.real(0.2, 10.0);
    p.elasticity_v = gen.integer(1, 6);
    if (dtw(a, b, p.metric).value != brute_force_oracle(Algorithm::dtw, a, b, p).value)
      ok = false;
    double s_or = brute_force_oracle(Algorithm::sdtw, a, b, p).value;
    if (std::abs(sdtw(a, b, p.gamma, p.metric).value - s_or) > 1e-9 * (1.0 + std::abs(s_or)))
      ok = false;
    double g_or = brute_force_oracle(Algorithm::gak, a, b, p).value;
    if (std::abs(gak(a, b, p.gamma, p.metric).value - g_or) > 1e-9 * (1.0 + g_or)) ok = false;
    if (a.cols() <= b.cols()) {
      if (mvm(a, b, p.elasticity_v, p.metric).value !=
          brute_force_oracle(Algorithm::mvm, a, b, p).value)
        ok = false;
    }
  });
  return ok;
}

bool ranking_properties() {
  bool ok = true;
  prop::for_each_case(9112, [&](prop::Gen& gen, int) {
    const std::size_t per_class = 10, features = 3;
    Matrix data(2 * per_class, features);
    std::vector<int> labels;
    for (std::size_t idx = 0; idx < 2 * per_class; ++idx) {
      labels.push_back(idx < per_class ? 0 : 1);
      for (std::size_t j = 0; j < features; ++j)
        data.at(idx, j) = gen.real(0, 1) + (idx < per_class ? 0.0 : 0.3);
    }
    RankedFeatures base = relieff(data, labels, 3, 0, 1);
    for (double w : base.weights)
      if (w < -1.0 || w > 1.0) ok = false;

    std::vector<std::size_t> perm(2 * per_class);
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), gen.rng);
    Matrix shuffled(2 * per_class, features);
    std::vector<int> shuffled_labels(2 * per_class);
    for (std::size_t i = 0; i < perm.size(); ++i) {
      shuffled_labels[i] = labels[perm[i]];
      for (std::size_t j = 0; j < features; ++j) shuffled.at(i, j) = data.at(perm[i], j);
    }
    RankedFeatures moved = relieff(shuffled, shuffled_labels, 3, 0, 1);
    for (std::size_t j = 0; j < features; ++j)
      if (std::abs(base.weights[j] - moved.weights[j]) > 1e-12) ok = false;
  });
  prop::for_each_case(9113, [&](prop::Gen&, int i) {
    const int k = 3;
    // Point atoms duplicated beyond k so that duplication cannot change any
    // neighbor distance.
    prop::Gen local(7800 + static_cast<std::uint64_t>(i));
    const std::size_t atoms = 3, features = 4, copies = 5;
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int cls = 0; cls < 2; ++cls)
      for (std::size_t a = 0; a < atoms; ++a) {
        std::vector<double> atom(features);
        for (auto& v : atom) v = local.real(0.0, 1.0);
        for (std::size_t c = 0; c < copies; ++c) {
          rows.push_back(atom);
          labels.push_back(cls);
        }
      }
    RankedFeatures r1 = relieff(Matrix::from_rows(rows), labels, k, 0, 1);
    std::vector<std::vector<double>> doubled;
    std::vector<int> doubled_labels;
    for (std::size_t idx = 0; idx < rows.size(); ++idx) {
      doubled.push_back(rows[idx]);
      doubled.push_back(rows[idx]);
      doubled_labels.push_back(labels[idx]);
      doubled_labels.push_back(labels[idx]);
    }
    RankedFeatures r2 = relieff(Matrix::from_rows(doubled), doubled_labels, k, 0, 1);
    for (std::size_t j = 0; j < r1.weights.size(); ++j)
      if (std::abs(r1.weights[j] - r2.weights[j]) > 1e-9) ok = false;
  });
  return ok;
}

bool pipeline_properties() {
  bool ok = true;
  prop::for_each_case(9114, [&](prop::Gen& gen, int) {
    // Distinct random-walk references; every frame of every reference must
    // come back as its own channel.
    const int m = gen.integer(2, 5);
    const std::size_t len = 32, w = 16;
    ReferenceSet refs;
    for (int ch = 1; ch <= m; ++ch) {
      std::vector<double> v(len);
      double level = gen.real(-5, 5);
      for (std::size_t k = 0; k < len; ++k) {
        level += gen.real(-1.0, 1.0) * (1.0 + ch);
        v[k] = level + 15.0 * ch * std::sin(2.0 * std::numbers::pi *
                                            static_cast<double>(k) * ch / 16.0);
      }
      refs.references.push_back({ch, FeatureSeries::single_row("p", std::move(v), 50.0)});
    }
    for (const auto& entry : refs.references)
      for (std::size_t off = 0; off + w <= len; off += w) {
        Frame f;
        f.values = entry.series.values.slice_cols(off, w);
        f.start_index = off;
        f = remove_dc(f);
        if (identify(f, refs, Algorithm::dtw, {}).channel != entry.channel_id) ok = false;
      }
  });
  prop::for_each_case(9115, [&](prop::Gen& gen, int) {
    const int m = gen.integer(2, 8);
    std::vector<double> scores;
    std::vector<int> ids;
    for (int i = 0; i < m; ++i) {
      scores.push_back(gen.real(-10, 10));
      ids.push_back(i + 1);
    }
    scores.push_back(gen.real(-10, 10));
    int base = argmin_channel(scores, ids, NoTvPolicy::extra_class, 0.0);
    double c = gen.real(0.1, 50.0), shift = gen.real(-100, 100);
    std::vector<double> t;
    for (double s : scores) t.push_back(s * c + shift);
    if (argmin_channel(t, ids, NoTvPolicy::extra_class, 0.0) != base) ok = false;
  });
  prop::for_each_case(9116, [&](prop::Gen& gen, int) {
    ReferenceSet refs;
    for (int ch = 1; ch <= 3; ++ch) {
      std::vector<double> v = gen.reals(40, -10, 10);
      for (std::size_t k = 0; k < v.size(); ++k) v[k] *= ch;
      refs.references.push_back({ch, FeatureSeries::single_row("p", std::move(v), 50.0)});
    }
    FeatureSeries agg = FeatureSeries::single_row("p", gen.reals(40, -20, 20), 50.0);
    FeatureSeries shifted = agg;
    double c = gen.real(-3000, 3000);
    for (double& v : shifted.values.row(0)) v += c;
    Frame a{agg.values.slice_cols(0, 20), 0, false};
    Frame b{shifted.values.slice_cols(0, 20), 0, false};
    Identification ia = identify(remove_dc(a), refs, Algorithm::dtw, {});
    Identification ib = identify(remove_dc(b), refs, Algorithm::dtw, {});
    if (ia.channel != ib.channel) ok = false;
    for (std::size_t s = 0; s < ia.scores.size(); ++s)
      if (std::abs(ia.scores[s] - ib.scores[s]) > 1e-9 * (1.0 + std::abs(ia.scores[s])))
        ok = false;
  });
  return ok;
}

bool evaluation_properties() {
  bool ok = true;
  prop::for_each_case(9117, [&](prop::Gen& gen, int) {
    const auto n = static_cast<std::size_t>(gen.integer(2, 6));
    Confusion c(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
      c[i][i] = gen.integer(1, 9);
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) c[i][j] = gen.integer(0, 9);
    }
    double acc = accuracy(c), f1 = f1_score(c);
    if (acc < 0.0 || acc > 1.0 || f1 < 0.0 || f1 > 1.0) ok = false;
    bool diagonal = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && c[i][j] != 0) diagonal = false;
    if ((acc == 1.0 && f1 == 1.0) != diagonal) ok = false;

    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), gen.rng);
    Confusion p(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) p[perm[i]][perm[j]] = c[i][j];
    if (std::abs(accuracy(p) - acc) > 1e-12 || std::abs(f1_score(p) - f1) > 1e-12) ok = false;
  });

  {  // Bit-reproducibility across runs and thread counts.
    auto world = make_world(3, 2.0, 2, 21, MonitorProfile::acer(), true);
    for (Algorithm alg : {Algorithm::dtw, Algorithm::mvm}) {
      EvalParams p = protocol_params(alg, Protocol::B, 50, 2, 1.0);
      EvalReport r1 = run_protocol(world->inputs, p);
      p.threads = 3;
      EvalReport r2 = run_protocol(world->inputs, p);
      p.threads = 1;
      EvalReport r3 = run_protocol(world->inputs, p);
      if (!(r1.confusion == r2.confusion && r1.confusion == r3.confusion)) ok = false;
      if (r1.acc != r2.acc || r1.acc != r3.acc) ok = false;
    }
  }

  {  // Whole-stack monotonicity: stronger noise never helps, in the median
     // over 10 seeds at factors {0, 0.5, 1, 2} of the calibrated scale.
    std::vector<double> factors = {0.0, 0.5, 1.0, 2.0};
    std::vector<std::vector<double>> accs(factors.size());
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      auto world = make_world(4, 3.0, 6, 100 + seed, MonitorProfile::acer(), true);
      for (std::size_t fi = 0; fi < factors.size(); ++fi)
        accs[fi].push_back(run_protocol(world->inputs,
                                        protocol_params(Algorithm::dtw, Protocol::B, 150, 6,
                                                        factors[fi] * g_calibrated_scale))
                               .acc);
    }
    double prev = 2.0;
    std::vector<double> medians;
    for (std::size_t fi = 0; fi < factors.size(); ++fi) {
      double m = median(accs[fi]);
      medians.push_back(m);
      if (m > prev + 1e-12) ok = false;
      prev = m;
    }
    note(format("monotonicity medians at x{0,0.5,1,2}: %.3f %.3f ...", medians[0], medians[1]));
    note(format("  ... %.3f %.3f", medians[2], medians[3]));
  }
  return ok;
}

bool synth_properties() {
  bool ok = true;
  prop::for_each_case(9118, [&](prop::Gen& gen, int) {
    std::uint64_t seed = static_cast<std::uint64_t>(gen.integer(1, 100000));
    int ch = gen.integer(1, 30);
    ChannelContent a = gen_channel_content(ch, seed, 1.0);
    ChannelContent b = gen_channel_content(ch, seed, 1.0);
    if (a.luma != b.luma) ok = false;
    FeatureSeries n1 = gen_household_noise(seed, 2.0, 6);
    FeatureSeries n2 = gen_household_noise(seed, 2.0, 6);
    if (!(n1.values == n2.values)) ok = false;
  });
  prop::for_each_case(9119, [&](prop::Gen& gen, int) {
    ChannelContent content = gen_channel_content(
        gen.integer(1, 20), static_cast<std::uint64_t>(gen.integer(1, 999)), 1.0);
    auto [i, v] = render_monitor(content, MonitorProfile::acer(), 7);
    auto [i2, v2] = render_monitor(content, MonitorProfile::acer(), 7);
    if (i.samples != i2.samples) ok = false;
    FeatureSeries s = extract_series(i, v);
    std::size_t mid = s.length() / 2;
    double composed = std::sqrt(std::pow(s.values.at(feat::i_hd3, mid), 2) +
                                std::pow(s.values.at(feat::i_hd5, mid), 2) +
                                std::pow(s.values.at(feat::i_hd7, mid), 2));
    double thd = s.values.at(feat::i_thd, mid);
    if (std::abs(thd - composed) > 0.02 * composed) ok = false;
  }, 60);
  {  // Separability contract on a handful of default-profile corpora.
    for (std::uint64_t seed = 1; seed <= 5 && ok; ++seed) {
      CorpusParams params;
      params.channels = 4;
      params.duration_s = 6.0;
      params.scenarios = 1;
      params.seed = seed;
      params.with_noise = false;
      Corpus corpus = build_corpus(params, MonitorProfile::acer());
      auto residual = [](const FeatureSeries& s) {
        Frame f{Matrix::row_vector(s.values.row(feat::p)), 0, false};
        return remove_dc(f).values;
      };
      ChannelContent content = gen_channel_content(corpus.channels[0].channel_id, seed, 6.0);
      auto [i2, v2] = render_monitor(content, MonitorProfile::acer(), seed + 7919);
      double floor_d = dtw(residual(corpus.channels[0].series),
                           residual(extract_series(i2, v2)), Metric::euclidean)
                           .value;
      for (std::size_t a = 0; a < corpus.channels.size(); ++a)
        for (std::size_t b = a + 1; b < corpus.channels.size(); ++b)
          if (dtw(residual(corpus.channels[a].series), residual(corpus.channels[b].series),
                  Metric::euclidean)
                  .value < 10.0 * floor_d)
            ok = false;
    }
  }
  return ok;
}

bool cli_properties() {
  bool ok = true;
  // Seed honoring: equal configs produce byte-identical artifacts.
  for (int i = 0; i < 3 && ok; ++i) {
    fs::path a = fs::temp_directory_path() / ("wattmatch_seed_a" + std::to_string(i));
    fs::path b = fs::temp_directory_path() / ("wattmatch_seed_b" + std::to_string(i));
    fs::remove_all(a);
    fs::remove_all(b);
    RunConfig cfg;
    cfg.set("channels", "2");
    cfg.set("duration", "2");
    cfg.set("scenarios", "1");
    cfg.set("seed", std::to_string(17 + i));
    cfg.set("out", a.string());
    cmd_synth(cfg);
    cfg.set("out", b.string());
    cmd_synth(cfg);
    if (slurp(a / "channel_01.csv") != slurp(b / "channel_01.csv")) ok = false;
    if (slurp(a / "noise.csv") != slurp(b / "noise.csv")) ok = false;
    fs::remove_all(a);
    fs::remove_all(b);
  }
  return ok;
}

bool invariant_battery() {
  g_prop_failures = 0;
  property("signals", signals_properties);
  property("features", features_properties);
  property("matching", matching_properties);
  property("ranking", ranking_properties);
  property("pipeline", pipeline_properties);
  property("evaluation", evaluation_properties);
  property("synth", synth_properties);
  property("cli", cli_properties);
  note(format("module property suites passed: %.0f of 8", 8.0 - g_prop_failures));
  return g_prop_failures == 0;
}

}  // namespace

int main() {
  std::printf("wattmatch acceptance suite\n");
  criterion(1, "oracle equivalence (exact): dtw and mvm vs enumeration", oracle_exact);
  criterion(2, "oracle equivalence (analytic): sdtw and gak vs enumeration", oracle_analytic);
  criterion(3, "feature correctness: harmonics and pure-sine identities", feature_correctness);
  criterion(4, "protocol A reproduction: four algorithms at ACC = F1 = 1.0",
            protocol_a_reproduction);
  criterion(5, "noise-robustness ordering: mvm >= dtw and mvm >= gak", noise_robustness_ordering);
  criterion(6, "protocol C degradation bounded for mvm", protocol_c_degradation);
  criterion(7, "metric formulas and grid-search argmax", metric_formulas);
  criterion(8, "determinism across thread counts", determinism);
  criterion(9, "module invariant suites", invariant_battery);

  if (g_failures == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criterion(s) failed\n", g_failures);
  return 1;
}
