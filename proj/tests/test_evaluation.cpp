// Copyright 2026 The WattMatch Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <doctest.h>

#include "prop.hpp"
#include "wattmatch/evaluation.hpp"
#include "wattmatch/features.hpp"
#include "wattmatch/synth.hpp"

using namespace wattmatch;

namespace {

FeatureSeries power_series(std::vector<double> values) {
  return FeatureSeries::single_row("p", std::move(values), 50.0);
}

// Small rendered corpus shared by the protocol tests.
struct SmallWorld {
  Corpus corpus;
  ReferenceSet refs;
  EvalInputs inputs;

  explicit SmallWorld(std::uint64_t seed, int channels = 3, double duration = 2.0,
                      int scenarios = 2) {
    CorpusParams params;
    params.channels = channels;
    params.duration_s = duration;
    params.scenarios = scenarios;
    params.seed = seed;
    corpus = build_corpus(params, MonitorProfile::acer());
    for (auto& ch : corpus.channels) refs.references.push_back({ch.channel_id, ch.series});
    for (const auto& ch : corpus.channels) inputs.test_signals.emplace_back(ch.channel_id, &ch.series);
    inputs.noise = &corpus.noise;
    inputs.refs_same = &refs;
  }
};

EvalParams desk_params(Algorithm alg, Protocol protocol, std::size_t window, int scenarios) {
  EvalParams p;
  p.algorithm = alg;
  p.protocol = protocol;
  p.window = window;
  p.scenarios = scenarios;
  p.threads = 1;
  return p;
}

std::string report_bytes(const EvalReport& report) {
  namespace fs = std::filesystem;
  fs::path tmp = fs::temp_directory_path() / "wattmatch_report_tmp.json";
  write_report_json(report, tmp);
  std::ifstream in(tmp, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  fs::remove(tmp);
  return ss.str();
}

}  // namespace

TEST_SUITE("evaluation") {

TEST_CASE("accuracy of a perfect diagonal is one") {
  Confusion c = {{5, 0}, {0, 7}};
  CHECK(accuracy(c) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(f1_score(c) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("two-class worked example") {
  Confusion c = {{8, 2}, {3, 7}};
  // Per class: (TP + TN) / total = 15 / 20 for both.
  CHECK(accuracy(c) == doctest::Approx(0.75).epsilon(1e-12));
  // Class F1 terms 16/21 and 14/19.
  double expect = 0.5 * (16.0 / 21.0 + 14.0 / 19.0);
  CHECK(f1_score(c) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(f1_score(c) == doctest::Approx(0.7494).epsilon(1e-4));
}

TEST_CASE("zero-support classes warn and contribute nothing") {
  Confusion c = {{4, 0, 0}, {0, 3, 0}, {0, 0, 0}};
  std::vector<std::string> warnings;
  double f1 = f1_score(c, &warnings);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("class 2") != std::string::npos);
  CHECK(f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("metric inputs are validated") {
  CHECK_THROWS_AS(accuracy({}), ArgumentError);
  CHECK_THROWS_AS(accuracy({{1, 2}, {3}}), ArgumentError);
  CHECK_THROWS_AS(accuracy({{0, 0}, {0, 0}}), ArgumentError);
  CHECK_THROWS_AS(accuracy({{-1, 0}, {0, 2}}), ArgumentError);
}

TEST_CASE("property: metrics live in [0,1] and reach 1 exactly on diagonals") {
  prop::for_each_case(601, [](prop::Gen& gen, int) {
    const auto n = static_cast<std::size_t>(gen.integer(2, 6));
    Confusion c(n, std::vector<std::int64_t>(n, 0));
    for (auto& row : c)
      for (auto& v : row) v = gen.integer(0, 9);
    for (std::size_t i = 0; i < n; ++i) c[i][i] += 1;  // every class supported

    double acc = accuracy(c);
    double f1 = f1_score(c);
    CHECK(acc >= 0.0);
    CHECK(acc <= 1.0);
    CHECK(f1 >= 0.0);
    CHECK(f1 <= 1.0);

    bool diagonal = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && c[i][j] != 0) diagonal = false;
    CHECK((acc == 1.0 && f1 == 1.0) == diagonal);
  });
}

TEST_CASE("property: consistent label permutations leave macro metrics alone") {
  prop::for_each_case(602, [](prop::Gen& gen, int) {
    const auto n = static_cast<std::size_t>(gen.integer(2, 6));
    Confusion c(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
      c[i][i] = gen.integer(1, 10);
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) c[i][j] = gen.integer(0, 5);
    }
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), gen.rng);
    Confusion p(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) p[perm[i]][perm[j]] = c[i][j];

    CHECK(accuracy(c) == doctest::Approx(accuracy(p)).epsilon(1e-12));
    CHECK(f1_score(c) == doctest::Approx(f1_score(p)).epsilon(1e-12));
  });
}

TEST_CASE("mix_noise slices at the scenario offset and sums power") {
  prop::Gen gen(603);
  FeatureSeries tv = power_series(gen.reals(20, 10, 40));
  FeatureSeries corpus = power_series(gen.reals(60, 100, 900));

  NoiseScenario scenario{1, 20, 20};
  FeatureSeries mixed = mix_noise(tv, corpus, scenario);
  for (std::size_t k = 0; k < 20; ++k)
    CHECK(mixed.values.at(0, k) ==
          doctest::Approx(tv.values.at(0, k) + corpus.values.at(0, 20 + k)).epsilon(1e-12));

  NoiseScenario overrun{2, 50, 20};
  CHECK_THROWS_AS(mix_noise(tv, corpus, overrun), ArgumentError);
  NoiseScenario wrong{0, 0, 10};
  CHECK_THROWS_AS(mix_noise(tv, corpus, wrong), ArgumentError);
}

TEST_CASE("scale_noise only touches additive rows") {
  FeatureSeries noise = gen_household_noise(5, 4.0, 6);
  FeatureSeries scaled = scale_noise(noise, 2.0);
  CHECK(scaled.values.at(feat::p, 7) == doctest::Approx(2.0 * noise.values.at(feat::p, 7)));
  CHECK(scaled.values.at(feat::i_thd, 7) == doctest::Approx(noise.values.at(feat::i_thd, 7)));
  CHECK(scaled.values.at(feat::v, 7) == doctest::Approx(noise.values.at(feat::v, 7)));
}

TEST_CASE("protocol A identifies every channel perfectly") {
  SmallWorld world(11);
  for (Algorithm alg : {Algorithm::dtw, Algorithm::sdtw, Algorithm::gak, Algorithm::mvm}) {
    EvalReport report = run_protocol(world.inputs, desk_params(alg, Protocol::A, 50, 1));
    CHECK(report.acc == 1.0);
    CHECK(report.f1 == 1.0);
    CHECK(report.frames_total == 8);  // (3 channels + no-TV) x 2 frames
  }
}

TEST_CASE("protocol B with silent noise reproduces protocol A") {
  SmallWorld world(12);
  EvalParams a = desk_params(Algorithm::dtw, Protocol::A, 50, 1);
  EvalParams b = desk_params(Algorithm::dtw, Protocol::B, 50, 1);
  b.noise_scale = 0.0;
  EvalReport ra = run_protocol(world.inputs, a);
  EvalReport rb = run_protocol(world.inputs, b);
  CHECK(ra.acc == rb.acc);
  CHECK(ra.f1 == rb.f1);
  CHECK(ra.confusion == rb.confusion);
}

TEST_CASE("protocol C without second-monitor references is a config error") {
  SmallWorld world(13);
  CHECK_THROWS_AS(run_protocol(world.inputs, desk_params(Algorithm::mvm, Protocol::C, 50, 1)),
                  ConfigError);
}

TEST_CASE("protocol B needs a noise corpus") {
  SmallWorld world(14);
  EvalInputs no_noise = world.inputs;
  no_noise.noise = nullptr;
  CHECK_THROWS_AS(run_protocol(no_noise, desk_params(Algorithm::dtw, Protocol::B, 50, 1)),
                  ConfigError);
}

TEST_CASE("scenario windows must fit the corpus") {
  SmallWorld world(15, 3, 2.0, 2);  // noise covers two scenarios only
  CHECK_THROWS_AS(run_protocol(world.inputs, desk_params(Algorithm::dtw, Protocol::B, 50, 5)),
                  ConfigError);
}

TEST_CASE("reports are identical across runs and thread counts") {
  SmallWorld world(16);
  EvalParams params = desk_params(Algorithm::dtw, Protocol::B, 50, 2);
  params.threads = 1;
  std::string first = report_bytes(run_protocol(world.inputs, params));
  params.threads = 3;
  std::string second = report_bytes(run_protocol(world.inputs, params));
  params.threads = 1;
  std::string third = report_bytes(run_protocol(world.inputs, params));
  CHECK(first == second);
  CHECK(first == third);
}

TEST_CASE("report json round-trips") {
  SmallWorld world(17);
  EvalReport report = run_protocol(world.inputs, desk_params(Algorithm::mvm, Protocol::B, 50, 2));
  namespace fs = std::filesystem;
  fs::path tmp = fs::temp_directory_path() / "wattmatch_report_roundtrip.json";
  write_report_json(report, tmp);
  EvalReport loaded = read_report_json(tmp);
  CHECK(loaded.confusion == report.confusion);
  CHECK(loaded.acc == doctest::Approx(report.acc).epsilon(1e-15));
  CHECK(loaded.labels == report.labels);
  CHECK(loaded.per_scenario.size() == report.per_scenario.size());
  fs::remove(tmp);
}

TEST_CASE("grid search on a single point returns it") {
  SmallWorld world(18);
  EvalParams base = desk_params(Algorithm::sdtw, Protocol::A, 50, 2);
  auto [best, table] = grid_search(world.inputs, base, {7.5}, 0.5);
  CHECK(best == 7.5);
  REQUIRE(table.size() == 1);
  CHECK(table[0].param == 7.5);
}

TEST_CASE("grid search finds the rigged optimum and breaks ties downward") {
  // Channel 1 carries large alternating spikes, channel 2 a faint wiggle.
  // With a small gamma the soft minimum tracks the best alignment and both
  // channels self-identify; with a huge gamma it averages over all paths and
  // the spiky channel drifts to the faint reference. The optimum is known to
  // be the small gamma by construction.
  const std::size_t len = 12;
  std::vector<double> spiky(len), faint(len);
  for (std::size_t k = 0; k < len; ++k) {
    spiky[k] = (k % 2 == 0) ? 10.0 : -10.0;
    faint[k] = 0.1 * std::sin(2.0 * std::numbers::pi * static_cast<double>(k) / 5.0);
  }
  FeatureSeries ch1 = power_series(spiky);
  FeatureSeries ch2 = power_series(faint);
  ReferenceSet refs;
  refs.references.push_back({1, ch1});
  refs.references.push_back({2, ch2});
  EvalInputs inputs;
  inputs.test_signals = {{1, &ch1}, {2, &ch2}};
  inputs.refs_same = &refs;

  EvalParams base = desk_params(Algorithm::sdtw, Protocol::A, len, 2);
  base.normalize = false;

  // Verify the rig: the two grid points really order the accuracies.
  EvalParams probe = base;
  probe.match.gamma = 0.01;
  double acc_small = run_protocol(inputs, probe).acc;
  probe.match.gamma = 1e6;
  double acc_large = run_protocol(inputs, probe).acc;
  REQUIRE(acc_small > acc_large);

  auto [best, table] = grid_search(inputs, base, {0.01, 1e6}, 0.5);
  CHECK(best == 0.01);
  REQUIRE(table.size() == 2);
  CHECK(table[0].acc == acc_small);
  CHECK(table[1].acc == acc_large);

  // Equal accuracies tie to the smaller parameter.
  auto [tied, tied_table] = grid_search(inputs, base, {0.01, 0.02}, 0.5);
  CHECK(tied == 0.01);
  CHECK(tied_table[0].acc == tied_table[1].acc);
}

TEST_CASE("threshold calibration tracks self-distances") {
  SmallWorld world(19);
  EvalParams params = desk_params(Algorithm::dtw, Protocol::A, 50, 1);
  double theta = calibrate_threshold(world.inputs, params);
  // Protocol A self-distances are all zero.
  CHECK(theta == 0.0);

  EvalParams noisy = desk_params(Algorithm::dtw, Protocol::B, 50, 2);
  double theta_b = calibrate_threshold(world.inputs, noisy);
  CHECK(theta_b > 0.0);
}

TEST_CASE("csv emission matches the confusion") {
  SmallWorld world(20);
  EvalReport report = run_protocol(world.inputs, desk_params(Algorithm::dtw, Protocol::A, 50, 1));
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "wattmatch_eval_csv";
  fs::create_directories(dir);
  write_confusion_csv(report, dir / "confusion.csv");
  write_heatmap_csv(report, dir / "heatmap.csv");

  std::ifstream in(dir / "confusion.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "label,ch01,ch02,ch03,no_tv");
  std::string first;
  std::getline(in, first);
  CHECK(first.rfind("ch01,", 0) == 0);
  fs::remove_all(dir);
}

}  // TEST_SUITE
