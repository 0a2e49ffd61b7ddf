// Copyright 2026 The phasecont Authors
// SPDX-License-Identifier: Apache-2.0
//
// phasecont: batch loss/metric reports and phase-field inspection.

#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "phasecont/batch.hpp"
#include "phasecont/error.hpp"

namespace {

using namespace phasecont;

struct Flags {
  std::string config;
  std::string clean, enhanced, noisy, out, format, preset, stft, what;
  std::size_t jobs = 0;
};

void AddInputFlags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--clean", f.clean, "clean reference file or directory");
  cmd->add_option("--enhanced", f.enhanced, "enhanced file or directory");
  cmd->add_option("--noisy", f.noisy, "noisy file or directory");
  cmd->add_option("--config", f.config, "INI-style configuration file");
  cmd->add_option("--out", f.out, "output path (default: stdout)");
  cmd->add_option("--format", f.format, "report format")->check(CLI::IsMember({"csv", "records"}));
  cmd->add_option("--jobs", f.jobs, "worker threads")->check(CLI::PositiveNumber);
}

// Config file first, then every flag that was given overrides its key.
RunConfig BuildConfig(const Flags& f) {
  RunConfig cfg;
  if (!f.config.empty()) ApplyConfigFile(cfg, f.config);
  std::string overrides;
  auto set = [&](const char* section, const char* key, const std::string& v) {
    if (!v.empty()) overrides += std::string("[") + section + "]\n" + key + " = " + v + "\n";
  };
  set("input", "clean", f.clean);
  set("input", "enhanced", f.enhanced);
  set("input", "noisy", f.noisy);
  set("output", "out", f.out);
  set("output", "format", f.format);
  if (f.jobs) set("output", "jobs", std::to_string(f.jobs));
  set("inspect", "stft", f.stft);
  set("inspect", "what", f.what);
  ApplyConfigText(cfg, overrides);
  if (!f.preset.empty()) ApplyPreset(cfg, f.preset);
  return cfg;
}

template <typename Fn>
int WithOutput(const RunConfig& cfg, Fn&& fn) {
  if (!cfg.out) return fn(std::cout);
  std::ofstream file(*cfg.out, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorKind::kIo, "cannot open " + cfg.out->string());
  return fn(file);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-aware speech enhancement losses and metrics"};
  app.require_subcommand(1);

  Flags loss_flags, metric_flags, inspect_flags;
  auto* loss = app.add_subcommand("loss", "per-utterance training-loss report");
  AddInputFlags(loss, loss_flags);
  loss->add_option("--preset", loss_flags.preset, "loss weight preset")
      ->check(CLI::IsMember({"pl", "pl-pcl"}));

  auto* metrics = app.add_subcommand("metrics", "per-utterance evaluation metrics");
  AddInputFlags(metrics, metric_flags);

  auto* inspect = app.add_subcommand("inspect", "dump phase, kernel or derivative grids");
  std::string inspect_file;
  inspect->add_option("file", inspect_file, "WAV file")->required();
  inspect->add_option("--what", inspect_flags.what, "grid to dump")
      ->check(CLI::IsMember({"phase", "kernel", "derivatives"}));
  inspect->add_option("--stft", inspect_flags.stft, "fft:win:hop[:window]");
  inspect->add_option("--config", inspect_flags.config, "INI-style configuration file");
  inspect->add_option("--out", inspect_flags.out, "output path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*loss) {
      const RunConfig cfg = BuildConfig(loss_flags);
      return WithOutput(cfg, [&](std::ostream& out) { return RunLossBatch(cfg, out).exit_code(); });
    }
    if (*metrics) {
      const RunConfig cfg = BuildConfig(metric_flags);
      return WithOutput(cfg,
                        [&](std::ostream& out) { return RunMetricsBatch(cfg, out).exit_code(); });
    }
    const RunConfig cfg = BuildConfig(inspect_flags);
    const Waveform w = ReadWav(inspect_file);
    return WithOutput(cfg, [&](std::ostream& out) {
      WriteInspection(w, cfg.inspect_stft, cfg.inspect, out, inspect_file);
      return 0;
    });
  } catch (const Error& e) {
    std::cerr << "phasecont: " << ToString(e.kind()) << " error: " << e.what() << "\n";
    return e.kind() == ErrorKind::kConfig ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "phasecont: " << e.what() << "\n";
    return 1;
  }
}
