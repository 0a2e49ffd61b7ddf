// Copyright 2026 The phasecont Authors
// SPDX-License-Identifier: Apache-2.0

#include "phasecont/run_config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "phasecont/error.hpp"

namespace phasecont {
namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double ParseDouble(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw Error(ErrorKind::kConfig, key + ": expected a number, got '" + v + "'");
  return out;
}

std::size_t ParseCount(const std::string& key, const std::string& v) {
  std::size_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw Error(ErrorKind::kConfig, key + ": expected a non-negative integer, got '" + v + "'");
  return out;
}

std::string Num(double v) { return fmt::format("{}", v); }

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& Setters() {
  static const std::map<std::string, Setter> setters = {
      {"input.clean", [](RunConfig& c, const std::string& v) { c.clean = v; }},
      {"input.enhanced", [](RunConfig& c, const std::string& v) { c.enhanced = v; }},
      {"input.noisy", [](RunConfig& c, const std::string& v) { c.noisy = v; }},
      {"output.out", [](RunConfig& c, const std::string& v) { c.out = v; }},
      {"output.format",
       [](RunConfig& c, const std::string& v) {
         if (v == "csv") c.format = ReportFormat::kCsv;
         else if (v == "records") c.format = ReportFormat::kRecords;
         else throw Error(ErrorKind::kConfig, "output.format: expected csv or records");
       }},
      {"output.jobs",
       [](RunConfig& c, const std::string& v) { c.jobs = ParseCount("output.jobs", v); }},
      {"loss.lambda0",
       [](RunConfig& c, const std::string& v) { c.weights.lambda0 = ParseDouble("loss.lambda0", v); }},
      {"loss.lambda1",
       [](RunConfig& c, const std::string& v) { c.weights.lambda1 = ParseDouble("loss.lambda1", v); }},
      {"loss.lambda2",
       [](RunConfig& c, const std::string& v) { c.weights.lambda2 = ParseDouble("loss.lambda2", v); }},
      {"loss.lambda_p",
       [](RunConfig& c, const std::string& v) { c.weights.lambda_p = ParseDouble("loss.lambda_p", v); }},
      {"loss.lambda_pc",
       [](RunConfig& c, const std::string& v) {
         c.weights.lambda_pc = ParseDouble("loss.lambda_pc", v);
       }},
      {"loss.phase_mode",
       [](RunConfig& c, const std::string& v) {
         if (v == "wrapped") c.phase_mode = PhaseLossMode::kWrapped;
         else if (v == "noisy-referenced") c.phase_mode = PhaseLossMode::kNoisyReferenced;
         else throw Error(ErrorKind::kConfig, "loss.phase_mode: expected wrapped or noisy-referenced");
       }},
      {"loss.resolutions",
       [](RunConfig& c, const std::string& v) { c.resolutions = ParseMultiResConfig(v); }},
      {"metrics.snr_frame",
       [](RunConfig& c, const std::string& v) {
         c.metrics.snr_frame = ParseCount("metrics.snr_frame", v);
       }},
      {"metrics.snr_hop",
       [](RunConfig& c, const std::string& v) { c.metrics.snr_hop = ParseCount("metrics.snr_hop", v); }},
      {"metrics.fw_stft",
       [](RunConfig& c, const std::string& v) { c.metrics.fw_stft = ParseStftConfig(v); }},
      {"metrics.bands",
       [](RunConfig& c, const std::string& v) { c.metrics.bands.bands = ParseCount("metrics.bands", v); }},
      {"metrics.band_min_hz",
       [](RunConfig& c, const std::string& v) {
         c.metrics.bands.min_hz = ParseDouble("metrics.band_min_hz", v);
       }},
      {"metrics.band_max_hz",
       [](RunConfig& c, const std::string& v) {
         c.metrics.bands.max_hz = ParseDouble("metrics.band_max_hz", v);
       }},
      {"metrics.band_exponent",
       [](RunConfig& c, const std::string& v) {
         c.metrics.bands.weight_exponent = ParseDouble("metrics.band_exponent", v);
       }},
      {"metrics.phase_stft",
       [](RunConfig& c, const std::string& v) { c.metrics.phase_stft = ParseStftConfig(v); }},
      {"metrics.energy_gate",
       [](RunConfig& c, const std::string& v) {
         c.metrics.voicing.energy_gate = ParseDouble("metrics.energy_gate", v);
       }},
      {"metrics.periodicity",
       [](RunConfig& c, const std::string& v) {
         c.metrics.voicing.periodicity = ParseDouble("metrics.periodicity", v);
       }},
      {"metrics.f0_min_hz",
       [](RunConfig& c, const std::string& v) {
         c.metrics.voicing.f0_min_hz = ParseDouble("metrics.f0_min_hz", v);
       }},
      {"metrics.f0_max_hz",
       [](RunConfig& c, const std::string& v) {
         c.metrics.voicing.f0_max_hz = ParseDouble("metrics.f0_max_hz", v);
       }},
      {"metrics.sdri",
       [](RunConfig& c, const std::string& v) {
         if (v == "auto") c.sdri = SdriMode::kAuto;
         else if (v == "on") c.sdri = SdriMode::kOn;
         else if (v == "off") c.sdri = SdriMode::kOff;
         else throw Error(ErrorKind::kConfig, "metrics.sdri: expected auto, on or off");
       }},
      {"inspect.stft",
       [](RunConfig& c, const std::string& v) { c.inspect_stft = ParseStftConfig(v); }},
      {"inspect.what",
       [](RunConfig& c, const std::string& v) {
         if (v == "phase") c.inspect = InspectKind::kPhase;
         else if (v == "kernel") c.inspect = InspectKind::kKernel;
         else if (v == "derivatives") c.inspect = InspectKind::kDerivatives;
         else throw Error(ErrorKind::kConfig, "inspect.what: expected phase, kernel or derivatives");
       }},
  };
  return setters;
}

}  // namespace

std::string ToString(ReportFormat f) { return f == ReportFormat::kCsv ? "csv" : "records"; }

std::string ToString(SdriMode m) {
  switch (m) {
    case SdriMode::kAuto: return "auto";
    case SdriMode::kOn: return "on";
    case SdriMode::kOff: return "off";
  }
  return "auto";
}

std::string ToString(InspectKind k) {
  switch (k) {
    case InspectKind::kPhase: return "phase";
    case InspectKind::kKernel: return "kernel";
    case InspectKind::kDerivatives: return "derivatives";
  }
  return "phase";
}

std::string ToString(PhaseLossMode m) {
  return m == PhaseLossMode::kWrapped ? "wrapped" : "noisy-referenced";
}

LossWeights PresetWeights(const std::string& name) {
  if (name == "pl") return LossWeights::PhaseLossOnly();
  if (name == "pl-pcl") return LossWeights::PhaseLossAndContinuity();
  throw Error(ErrorKind::kConfig, "unknown preset '" + name + "' (expected pl or pl-pcl)");
}

void ApplyPreset(RunConfig& cfg, const std::string& name) {
  cfg.weights = PresetWeights(name);
  cfg.preset = name;
}

void ApplyConfigText(RunConfig& cfg, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::vector<std::pair<std::string, std::string>> assignments;
  std::optional<std::string> preset;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = Trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    const std::string where = "config line " + std::to_string(line_no) + ": ";
    if (t.front() == '[') {
      if (t.back() != ']') throw Error(ErrorKind::kConfig, where + "unterminated section header");
      section = Trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::kConfig, where + "expected key = value");
    if (section.empty()) throw Error(ErrorKind::kConfig, where + "key outside of a section");
    const std::string key = section + "." + Trim(t.substr(0, eq));
    const std::string value = Trim(t.substr(eq + 1));
    if (key == "loss.preset") {
      preset = value;
    } else if (!Setters().contains(key)) {
      throw Error(ErrorKind::kConfig, where + "unknown key '" + key + "'");
    } else {
      assignments.emplace_back(key, value);
    }
  }
  if (preset) ApplyPreset(cfg, *preset);
  for (const auto& [key, value] : assignments) {
    Setters().at(key)(cfg, value);
    if (key.starts_with("loss.lambda")) cfg.preset = "custom";
  }
}

void ApplyConfigFile(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kConfig, "cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  ApplyConfigText(cfg, buffer.str());
}

namespace {

void ValidateCommon(const RunConfig& cfg) {
  if (!cfg.clean) throw Error(ErrorKind::kConfig, "missing clean input");
  if (!cfg.enhanced) throw Error(ErrorKind::kConfig, "missing enhanced input");
  if (cfg.jobs == 0) throw Error(ErrorKind::kConfig, "jobs must be at least 1");
}

}  // namespace

void ValidateForLoss(const RunConfig& cfg) {
  ValidateCommon(cfg);
  cfg.weights.Validate();
  try {
    cfg.resolutions.Validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::kConfig, e.what());
  }
  if (cfg.phase_mode == PhaseLossMode::kNoisyReferenced && !cfg.noisy)
    throw Error(ErrorKind::kConfig, "noisy-referenced phase loss requires a noisy input");
}

void ValidateForMetrics(const RunConfig& cfg) {
  ValidateCommon(cfg);
  if (cfg.sdri == SdriMode::kOn && !cfg.noisy)
    throw Error(ErrorKind::kConfig, "sdri requested but no noisy input given");
  const auto& m = cfg.metrics;
  if (m.snr_frame == 0 || m.snr_hop == 0)
    throw Error(ErrorKind::kConfig, "snr frame and hop must be positive");
  if (m.bands.bands == 0 || m.bands.min_hz < 0.0 || m.bands.min_hz >= m.bands.max_hz)
    throw Error(ErrorKind::kConfig, "invalid band specification");
  if (m.voicing.f0_min_hz <= 0.0 || m.voicing.f0_min_hz >= m.voicing.f0_max_hz)
    throw Error(ErrorKind::kConfig, "invalid f0 range");
}

std::vector<std::pair<std::string, std::string>> EffectiveConfig(const RunConfig& cfg) {
  auto path = [](const std::optional<std::filesystem::path>& p) {
    return p ? p->generic_string() : std::string();
  };
  const auto& m = cfg.metrics;
  return {
      {"input.clean", path(cfg.clean)},
      {"input.enhanced", path(cfg.enhanced)},
      {"input.noisy", path(cfg.noisy)},
      {"output.format", ToString(cfg.format)},
      {"loss.preset", cfg.preset},
      {"loss.lambda0", Num(cfg.weights.lambda0)},
      {"loss.lambda1", Num(cfg.weights.lambda1)},
      {"loss.lambda2", Num(cfg.weights.lambda2)},
      {"loss.lambda_p", Num(cfg.weights.lambda_p)},
      {"loss.lambda_pc", Num(cfg.weights.lambda_pc)},
      {"loss.phase_mode", ToString(cfg.phase_mode)},
      {"loss.resolutions", ToString(cfg.resolutions)},
      {"metrics.snr_frame", std::to_string(m.snr_frame)},
      {"metrics.snr_hop", std::to_string(m.snr_hop)},
      {"metrics.fw_stft", ToString(m.fw_stft)},
      {"metrics.bands", std::to_string(m.bands.bands)},
      {"metrics.band_min_hz", Num(m.bands.min_hz)},
      {"metrics.band_max_hz", Num(m.bands.max_hz)},
      {"metrics.band_exponent", Num(m.bands.weight_exponent)},
      {"metrics.phase_stft", ToString(m.phase_stft)},
      {"metrics.energy_gate", Num(m.voicing.energy_gate)},
      {"metrics.periodicity", Num(m.voicing.periodicity)},
      {"metrics.f0_min_hz", Num(m.voicing.f0_min_hz)},
      {"metrics.f0_max_hz", Num(m.voicing.f0_max_hz)},
      {"metrics.sdri", ToString(cfg.sdri)},
  };
}

}  // namespace phasecont
