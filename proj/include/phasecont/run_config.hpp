// Copyright 2026 The phasecont Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phasecont/losses.hpp"
#include "phasecont/metrics.hpp"
#include "phasecont/spectral.hpp"

namespace phasecont {

enum class ReportFormat { kCsv, kRecords };
enum class SdriMode { kAuto, kOn, kOff };
enum class InspectKind { kPhase, kKernel, kDerivatives };

std::string ToString(ReportFormat f);
std::string ToString(SdriMode m);
std::string ToString(InspectKind k);
std::string ToString(PhaseLossMode m);

struct RunConfig {
  std::optional<std::filesystem::path> clean;
  std::optional<std::filesystem::path> enhanced;
  std::optional<std::filesystem::path> noisy;
  std::optional<std::filesystem::path> out;
  ReportFormat format = ReportFormat::kCsv;
  std::size_t jobs = 1;

  std::string preset = "pl-pcl";
  LossWeights weights = LossWeights::PhaseLossAndContinuity();
  PhaseLossMode phase_mode = PhaseLossMode::kWrapped;
  MultiResConfig resolutions = MultiResConfig::Default();

  MetricOptions metrics;
  SdriMode sdri = SdriMode::kAuto;

  StftConfig inspect_stft{512, 128, 512, WindowKind::kHann};
  InspectKind inspect = InspectKind::kPhase;
};

// Weights for a named preset: "pl" (0.02 : 1 : 1, no continuity term) or
// "pl-pcl" (0.01 : 1 : 0.1 with 1 : 0.5). Throws kConfig otherwise.
LossWeights PresetWeights(const std::string& name);

// Sets the preset name and replaces all five weights.
void ApplyPreset(RunConfig& cfg, const std::string& name);

// Applies an INI-style text: "[section]" headers, "key = value" lines, '#'
// or ';' comments. Unknown sections or keys and malformed values throw
// kConfig. Within [loss], a preset is applied before explicit lambdas
// regardless of line order.
void ApplyConfigText(RunConfig& cfg, const std::string& text);
void ApplyConfigFile(RunConfig& cfg, const std::filesystem::path& path);

// Checks cross-field constraints; throws kConfig.
void ValidateForLoss(const RunConfig& cfg);
void ValidateForMetrics(const RunConfig& cfg);

// Every effective setting as ("section.key", value) in a fixed order; echoed
// into report headers.
std::vector<std::pair<std::string, std::string>> EffectiveConfig(const RunConfig& cfg);

}  // namespace phasecont
