// Copyright 2026 The phasecont Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <ostream>

#include "phasecont/audio_io.hpp"
#include "phasecont/report.hpp"
#include "phasecont/run_config.hpp"

namespace phasecont {

// Pairs inputs from directories, or builds a single pair when --clean names a
// file.
Pairing ResolveInputs(const RunConfig& cfg);

struct BatchOutcome {
  std::vector<ReportRow> rows;
  ReportSummary summary;

  // 0 unless every attempted utterance failed.
  int exit_code() const { return summary.ok == 0 && summary.failed > 0 ? 1 : 0; }
};

// Per-utterance loss reports (target = clean) followed by the dataset mean.
// Utterances run on cfg.jobs worker threads; rows are emitted in id order so
// the output does not depend on the degree of parallelism. Configuration
// errors throw kConfig before any file is read; per-utterance failures become
// failed rows.
BatchOutcome RunLossBatch(const RunConfig& cfg, std::ostream& out);

// Same for the evaluation metrics. SDRi is reported when a noisy input is
// configured (or forced on, which then requires one).
BatchOutcome RunMetricsBatch(const RunConfig& cfg, std::ostream& out);

// Text grid dump with axis labels:
//   phase:       time freq magnitude cos sin
//   kernel:      time freq dt dk cos sin   ((T-2)(K-2)*9 lines, center bins)
//   derivatives: time freq if gd
void WriteInspection(const Waveform& w, const StftConfig& cfg, InspectKind kind,
                     std::ostream& out, const std::string& source = "");

}  // namespace phasecont
