// Copyright 2026 The phasecont Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <fstream>

#include "phasecont/error.hpp"
#include "phasecont/run_config.hpp"
#include "test_support.hpp"

using namespace phasecont;

namespace {

ErrorKind KindOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::kIo;
}

std::string Lookup(const RunConfig& cfg, const std::string& key) {
  for (const auto& [k, v] : EffectiveConfig(cfg))
    if (k == key) return v;
  FAIL("missing key " << key);
  return {};
}

}  // namespace

TEST_CASE("defaults", "[config]") {
  const RunConfig cfg;
  CHECK(cfg.preset == "pl-pcl");
  CHECK(cfg.weights == LossWeights::PhaseLossAndContinuity());
  CHECK(cfg.resolutions.resolutions.size() == 3);
  CHECK(Lookup(cfg, "loss.resolutions") == "512:240:50,1024:600:120,2048:1200:240");
  CHECK(Lookup(cfg, "loss.lambda2") == "0.1");
  CHECK(Lookup(cfg, "metrics.fw_stft") == "512:480:120");
  CHECK(Lookup(cfg, "metrics.phase_stft") == "512:512:128");
}

TEST_CASE("presets", "[config]") {
  CHECK(PresetWeights("pl") == LossWeights{0.02, 1.0, 1.0, 1.0, 0.0});
  CHECK(PresetWeights("pl-pcl") == LossWeights{0.01, 1.0, 0.1, 1.0, 0.5});
  CHECK(KindOf([] { PresetWeights("nope"); }) == ErrorKind::kConfig);

  RunConfig cfg;
  ApplyPreset(cfg, "pl");
  CHECK(cfg.preset == "pl");
  CHECK(Lookup(cfg, "loss.lambda0") == "0.02");
  CHECK(Lookup(cfg, "loss.lambda_pc") == "0");
}

TEST_CASE("ini text", "[config]") {
  RunConfig cfg;
  ApplyConfigText(cfg, R"(
# comment
[input]
clean = a/clean
enhanced = a/enh

[output]
format = records
jobs = 3

[loss]
lambda2 = 0.7
preset = pl
phase_mode = wrapped
resolutions = 256:128:64, 512:256:128:rect

[metrics]
snr_frame = 400
sdri = off
)");
  CHECK(cfg.clean->generic_string() == "a/clean");
  CHECK(cfg.format == ReportFormat::kRecords);
  CHECK(cfg.jobs == 3);
  CHECK(cfg.preset == "custom");
  CHECK(cfg.weights == LossWeights{0.02, 1.0, 0.7, 1.0, 0.0});
  REQUIRE(cfg.resolutions.resolutions.size() == 2);
  CHECK(cfg.resolutions.resolutions[1].window == WindowKind::kRectangular);
  CHECK(cfg.metrics.snr_frame == 400);
  CHECK(cfg.sdri == SdriMode::kOff);
}

TEST_CASE("ini errors", "[config]") {
  RunConfig cfg;
  CHECK(KindOf([&] { ApplyConfigText(cfg, "[loss]\nlamda0 = 1\n"); }) == ErrorKind::kConfig);
  CHECK(KindOf([&] { ApplyConfigText(cfg, "[nosuch]\nx = 1\n"); }) == ErrorKind::kConfig);
  CHECK(KindOf([&] { ApplyConfigText(cfg, "lambda0 = 1\n"); }) == ErrorKind::kConfig);
  CHECK(KindOf([&] { ApplyConfigText(cfg, "[loss]\nlambda0 = abc\n"); }) == ErrorKind::kConfig);
  CHECK(KindOf([&] { ApplyConfigText(cfg, "[loss]\nlambda0\n"); }) == ErrorKind::kConfig);
  CHECK(KindOf([&] { ApplyConfigText(cfg, "[output]\nformat = xml\n"); }) == ErrorKind::kConfig);
  CHECK(KindOf([&] { ApplyConfigText(cfg, "[loss]\npreset = other\n"); }) == ErrorKind::kConfig);
  CHECK(KindOf([&] { ApplyConfigText(cfg, "[loss]\nresolutions = 512:600:50\n"); }) ==
        ErrorKind::kConfig);
  CHECK(KindOf([&] { ApplyConfigFile(cfg, "/nonexistent/phasecont.ini"); }) == ErrorKind::kConfig);
}

TEST_CASE("config file", "[config]") {
  phasecont::testing::TempDir dir("config");
  const auto path = dir.path() / "run.ini";
  std::ofstream(path) << "[metrics]\nsdri = on\n";
  RunConfig cfg;
  ApplyConfigFile(cfg, path);
  CHECK(cfg.sdri == SdriMode::kOn);
}

TEST_CASE("validation", "[config]") {
  RunConfig cfg;
  CHECK(KindOf([&] { ValidateForLoss(cfg); }) == ErrorKind::kConfig);
  cfg.clean = "c";
  cfg.enhanced = "e";
  CHECK_NOTHROW(ValidateForLoss(cfg));
  CHECK_NOTHROW(ValidateForMetrics(cfg));

  cfg.sdri = SdriMode::kOn;
  CHECK(KindOf([&] { ValidateForMetrics(cfg); }) == ErrorKind::kConfig);
  cfg.noisy = "n";
  CHECK_NOTHROW(ValidateForMetrics(cfg));

  RunConfig referenced = cfg;
  referenced.noisy.reset();
  referenced.phase_mode = PhaseLossMode::kNoisyReferenced;
  CHECK(KindOf([&] { ValidateForLoss(referenced); }) == ErrorKind::kConfig);

  RunConfig negative = cfg;
  negative.weights.lambda1 = -1.0;
  CHECK(KindOf([&] { ValidateForLoss(negative); }) == ErrorKind::kConfig);

  RunConfig no_jobs = cfg;
  no_jobs.jobs = 0;
  CHECK(KindOf([&] { ValidateForMetrics(no_jobs); }) == ErrorKind::kConfig);
}

TEST_CASE("effective config ignores jobs and output path", "[config]") {
  RunConfig a, b;
  b.jobs = 8;
  b.out = "somewhere.csv";
  CHECK(EffectiveConfig(a) == EffectiveConfig(b));
}
