// Copyright 2026 The phasecont Authors
// SPDX-License-Identifier: Apache-2.0

#include "phasecont/batch.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <thread>

#include "phasecont/error.hpp"
#include "phasecont/phase.hpp"

namespace phasecont {
namespace {

// Runs work(i) for i in [0, n) on up to `jobs` threads. Each slot is written
// by exactly one worker.
std::vector<ReportRow> ParallelRows(std::size_t n, std::size_t jobs,
                                    const std::function<ReportRow(std::size_t)>& work) {
  std::vector<ReportRow> rows(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) rows[i] = work(i);
  };
  const std::size_t threads = std::min(jobs, n);
  if (threads <= 1) {
    worker();
    return rows;
  }
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  pool.clear();  // joins
  return rows;
}

ReportRow Failed(const std::string& id, const std::exception& e) {
  ReportRow row;
  row.id = id;
  row.reason = e.what();
  return row;
}

ReportSummary Summarize(const std::vector<ReportRow>& rows, std::vector<SkippedPair> skipped) {
  ReportSummary s;
  for (const auto& r : rows) (r.ok ? s.ok : s.failed)++;
  s.skipped = std::move(skipped);
  return s;
}

}  // namespace

Pairing ResolveInputs(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  if (!cfg.clean || !cfg.enhanced) throw Error(ErrorKind::kConfig, "clean and enhanced inputs required");
  if (fs::is_regular_file(*cfg.clean)) {
    Pairing p;
    p.pairs.push_back({cfg.clean->stem().string(), *cfg.clean, cfg.noisy, *cfg.enhanced});
    return p;
  }
  return PairDirectories(*cfg.clean, *cfg.enhanced, cfg.noisy);
}

BatchOutcome RunLossBatch(const RunConfig& cfg, std::ostream& out) {
  ValidateForLoss(cfg);
  const Pairing pairing = ResolveInputs(cfg);
  const TotalLossOptions options{cfg.phase_mode, GradientMode::kSkip};

  BatchOutcome outcome;
  outcome.rows = ParallelRows(pairing.pairs.size(), cfg.jobs, [&](std::size_t i) {
    const PairedPaths& paths = pairing.pairs[i];
    try {
      const UtteranceTriple t = LoadTriple(paths);
      const std::span<const double> noisy =
          t.noisy ? std::span<const double>(t.noisy->samples) : std::span<const double>{};
      const auto result = TotalLoss(t.clean.samples, t.enhanced.samples, noisy, cfg.weights,
                                    cfg.resolutions, options);
      return ReportRow{paths.id, true, "", ToRecord(result.report)};
    } catch (const std::exception& e) {
      return Failed(paths.id, e);
    }
  });
  outcome.summary = Summarize(outcome.rows, pairing.skipped);
  WriteReport(out, cfg.format, "phasecont.loss", EffectiveConfig(cfg),
              LossColumns(cfg.resolutions.resolutions.size()), outcome.rows, outcome.summary);
  return outcome;
}

BatchOutcome RunMetricsBatch(const RunConfig& cfg, std::ostream& out) {
  ValidateForMetrics(cfg);
  const bool with_sdri = cfg.sdri != SdriMode::kOff && cfg.noisy.has_value();
  const Pairing pairing = ResolveInputs(cfg);

  BatchOutcome outcome;
  outcome.rows = ParallelRows(pairing.pairs.size(), cfg.jobs, [&](std::size_t i) {
    const PairedPaths& paths = pairing.pairs[i];
    try {
      const UtteranceTriple t = LoadTriple(paths);
      const Waveform* noisy = with_sdri && t.noisy ? &*t.noisy : nullptr;
      const MetricReport report = ComputeMetrics(t.clean, t.enhanced, noisy, cfg.metrics);
      return ReportRow{paths.id, true, "", ToRecord(report, with_sdri)};
    } catch (const std::exception& e) {
      return Failed(paths.id, e);
    }
  });
  outcome.summary = Summarize(outcome.rows, pairing.skipped);
  WriteReport(out, cfg.format, "phasecont.metrics", EffectiveConfig(cfg),
              MetricColumns(with_sdri), outcome.rows, outcome.summary);
  return outcome;
}

void WriteInspection(const Waveform& w, const StftConfig& cfg, InspectKind kind,
                     std::ostream& out, const std::string& source) {
  ValidateWaveform(w, "inspect");
  const ComplexSpectrogram s = Stft(w, cfg);
  const std::size_t frames = s.values.frames();
  const std::size_t bins = s.values.bins();

  std::optional<KernelStack> kernel;
  const PhaseField field = ComputePhaseField(s);
  if (kind == InspectKind::kKernel) kernel = ContinuityKernel(field);

  out << "# schema: phasecont.inspect/" << kReportSchemaVersion << "\n";
  out << "# kind: " << ToString(kind) << "\n";
  if (!source.empty()) out << "# source: " << source << "\n";
  out << "# sample_rate: " << w.sample_rate << "\n";
  out << "# stft: " << ToString(cfg) << "\n";
  out << "# frames: " << frames << "\n";
  out << "# bins: " << bins << "\n";

  if (kind == InspectKind::kPhase) {
    out << "# shape: " << frames << "x" << bins << "\n";
    out << "time freq magnitude cos sin\n";
    for (std::size_t t = 0; t < frames; ++t) {
      for (std::size_t k = 0; k < bins; ++k) {
        out << t << " " << k << " " << FormatNumber(field.magnitude(t, k)) << " "
            << FormatNumber(field.cos_vals(t, k)) << " " << FormatNumber(field.sin_vals(t, k))
            << "\n";
      }
    }
  } else if (kind == InspectKind::kKernel) {
    out << "# shape: " << kernel->centers_t() << "x" << kernel->centers_k() << "x3x3\n";
    out << "time freq dt dk cos sin\n";
    for (std::size_t n = 0; n < kernel->centers_t(); ++n) {
      for (std::size_t k = 0; k < kernel->centers_k(); ++k) {
        const auto& cb = kernel->cos_block(n, k);
        const auto& sb = kernel->sin_block(n, k);
        for (std::size_t row = 0; row < 3; ++row) {
          for (std::size_t col = 0; col < 3; ++col) {
            out << n + 1 << " " << k + 1 << " " << KernelStack::TimeOffset(col) << " "
                << KernelStack::FreqOffset(row) << " " << FormatNumber(cb[row][col]) << " "
                << FormatNumber(sb[row][col]) << "\n";
          }
        }
      }
    }
  } else {
    const DerivativeField d = DerivativeFields(s);
    out << "# shape: " << frames << "x" << bins << "\n";
    out << "time freq if gd\n";
    for (std::size_t t = 0; t < frames; ++t) {
      for (std::size_t k = 0; k < bins; ++k) {
        out << t << " " << k << " " << FormatNumber(d.if_vals(t, k)) << " "
            << FormatNumber(d.gd_vals(t, k)) << "\n";
      }
    }
  }
}

}  // namespace phasecont
