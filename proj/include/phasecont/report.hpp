// Copyright 2026 The phasecont Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "phasecont/audio_io.hpp"
#include "phasecont/losses.hpp"
#include "phasecont/metrics.hpp"
#include "phasecont/run_config.hpp"

namespace phasecont {

inline constexpr int kReportSchemaVersion = 1;
// Infinite dB values (e.g. SDR of a perfect estimate) are written as +/-99.
inline constexpr double kSerializedDbCap = 99.0;

// A value is absent (undefined metric, externally computed column), a number,
// or text.
using FieldValue = std::variant<std::monostate, double, std::string>;

// Flat, ordered key/value record.
struct Record {
  std::vector<std::pair<std::string, FieldValue>> fields;

  void Add(std::string key, FieldValue value) {
    fields.emplace_back(std::move(key), std::move(value));
  }
};

// Columns: l1, then sc_i, log_mag_i, pl_i, pcl_i per resolution i, then the
// resolution means stft and phase, then total.
Record ToRecord(const LossReport& report);
std::vector<std::string> LossColumns(std::size_t resolutions);

// Columns: snrseg, fwsnrseg, sdr, [sdri], unrmse, gd_rmse, if_rmse,
// voiced_frames, followed by empty columns for externally computed scores
// (wb_pesq, stoi, estoi, csig, cbak, covl, ncm).
Record ToRecord(const MetricReport& report, bool with_sdri);
std::vector<std::string> MetricColumns(bool with_sdri);

std::string FormatNumber(double v);

struct ReportRow {
  std::string id;
  bool ok = false;
  std::string reason;  // failure reason
  Record values;
};

struct ReportSummary {
  std::size_t ok = 0;
  std::size_t failed = 0;
  std::vector<SkippedPair> skipped;
};

// Column-wise mean of numeric fields over successful rows; fields that are
// absent in every successful row stay absent.
Record MeanRecord(const std::vector<ReportRow>& rows, const std::vector<std::string>& columns);

// Writes a complete report: header with schema and echoed configuration, one
// line per row in the given order, the mean row and the summary.
void WriteReport(std::ostream& out, ReportFormat format, const std::string& schema,
                 const std::vector<std::pair<std::string, std::string>>& config,
                 const std::vector<std::string>& columns, const std::vector<ReportRow>& rows,
                 const ReportSummary& summary);

}  // namespace phasecont
