// Copyright 2026 The phasecont Authors
// SPDX-License-Identifier: Apache-2.0

#include "phasecont/report.hpp"

#include <cmath>

#include <fmt/format.h>
#include "json.hpp"

namespace phasecont {
namespace {

double CapDb(double v) {
  if (std::isinf(v)) return v > 0 ? kSerializedDbCap : -kSerializedDbCap;
  return v;
}

FieldValue Optional(const std::optional<double>& v) {
  if (!v) return std::monostate{};
  return *v;
}

const std::vector<std::string>& ExternalColumns() {
  static const std::vector<std::string> cols = {"wb_pesq", "stoi", "estoi", "csig",
                                                "cbak",    "covl", "ncm"};
  return cols;
}

std::string CsvEscape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::string CsvValue(const FieldValue& v) {
  if (const auto* d = std::get_if<double>(&v)) return FormatNumber(*d);
  if (const auto* s = std::get_if<std::string>(&v)) return CsvEscape(*s);
  return "";
}

nlohmann::ordered_json JsonValue(const FieldValue& v) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  return nullptr;
}

const FieldValue* Find(const Record& r, const std::string& key) {
  for (const auto& [k, v] : r.fields) {
    if (k == key) return &v;
  }
  return nullptr;
}

}  // namespace

std::string FormatNumber(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{}", v);
}

std::vector<std::string> LossColumns(std::size_t resolutions) {
  std::vector<std::string> cols = {"l1"};
  for (std::size_t i = 0; i < resolutions; ++i) {
    const std::string s = std::to_string(i);
    cols.insert(cols.end(), {"sc_" + s, "log_mag_" + s, "pl_" + s, "pcl_" + s});
  }
  cols.insert(cols.end(), {"stft", "phase", "total"});
  return cols;
}

Record ToRecord(const LossReport& report) {
  Record r;
  r.Add("l1", report.l1);
  for (std::size_t i = 0; i < report.resolutions.size(); ++i) {
    const auto& res = report.resolutions[i];
    const std::string s = std::to_string(i);
    r.Add("sc_" + s, res.spectral_convergence);
    r.Add("log_mag_" + s, res.log_magnitude);
    r.Add("pl_" + s, res.phase);
    r.Add("pcl_" + s, res.phase_continuity);
  }
  r.Add("stft", report.stft);
  r.Add("phase", report.phase);
  r.Add("total", report.total);
  return r;
}

std::vector<std::string> MetricColumns(bool with_sdri) {
  std::vector<std::string> cols = {"snrseg", "fwsnrseg", "sdr"};
  if (with_sdri) cols.push_back("sdri");
  cols.insert(cols.end(), {"unrmse", "gd_rmse", "if_rmse", "voiced_frames"});
  cols.insert(cols.end(), ExternalColumns().begin(), ExternalColumns().end());
  return cols;
}

Record ToRecord(const MetricReport& report, bool with_sdri) {
  Record r;
  r.Add("snrseg", Optional(report.snrseg));
  r.Add("fwsnrseg", Optional(report.fwsnrseg));
  r.Add("sdr", CapDb(report.sdr));
  if (with_sdri) {
    r.Add("sdri", report.sdri ? FieldValue(CapDb(*report.sdri)) : FieldValue{});
  }
  r.Add("unrmse", Optional(report.unrmse));
  r.Add("gd_rmse", Optional(report.gd_rmse));
  r.Add("if_rmse", Optional(report.if_rmse));
  r.Add("voiced_frames", static_cast<double>(report.voiced_frame_count));
  for (const auto& c : ExternalColumns()) r.Add(c, std::monostate{});
  return r;
}

Record MeanRecord(const std::vector<ReportRow>& rows, const std::vector<std::string>& columns) {
  Record mean;
  for (const auto& col : columns) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& row : rows) {
      if (!row.ok) continue;
      const FieldValue* v = Find(row.values, col);
      if (const auto* d = v ? std::get_if<double>(v) : nullptr) {
        sum += *d;
        ++n;
      }
    }
    mean.Add(col, n ? FieldValue(sum / static_cast<double>(n)) : FieldValue{});
  }
  return mean;
}

void WriteReport(std::ostream& out, ReportFormat format, const std::string& schema,
                 const std::vector<std::pair<std::string, std::string>>& config,
                 const std::vector<std::string>& columns, const std::vector<ReportRow>& rows,
                 const ReportSummary& summary) {
  const Record mean = MeanRecord(rows, columns);

  if (format == ReportFormat::kCsv) {
    out << "# schema: " << schema << "/" << kReportSchemaVersion << "\n";
    for (const auto& [k, v] : config) out << "# config: " << k << "=" << v << "\n";
    out << "id,status,reason";
    for (const auto& c : columns) out << "," << c;
    out << "\n";
    auto line = [&](const std::string& id, const std::string& status,
                    const std::string& reason, const Record& values) {
      out << CsvEscape(id) << "," << status << "," << CsvEscape(reason);
      for (const auto& c : columns) {
        const FieldValue* v = Find(values, c);
        out << "," << (v ? CsvValue(*v) : "");
      }
      out << "\n";
    };
    for (const auto& row : rows) line(row.id, row.ok ? "ok" : "failed", row.reason, row.values);
    line("mean", "summary", "", mean);
    out << "# summary: ok=" << summary.ok << " skipped=" << summary.skipped.size()
        << " failed=" << summary.failed << "\n";
    for (const auto& s : summary.skipped) out << "# skipped: " << s.id << " " << s.reason << "\n";
    return;
  }

  using Json = nlohmann::ordered_json;
  Json header = {{"type", "header"}, {"schema", schema}, {"version", kReportSchemaVersion}};
  Json cfg = Json::object();
  for (const auto& [k, v] : config) cfg[k] = v;
  header["config"] = cfg;
  header["columns"] = columns;
  out << header.dump() << "\n";
  auto values_json = [&](const Record& values) {
    Json j = Json::object();
    for (const auto& c : columns) {
      const FieldValue* v = Find(values, c);
      j[c] = v ? JsonValue(*v) : Json(nullptr);
    }
    return j;
  };
  for (const auto& row : rows) {
    Json j = {{"type", "row"}, {"id", row.id}, {"status", row.ok ? "ok" : "failed"}};
    if (!row.ok) j["reason"] = row.reason;
    j["values"] = values_json(row.values);
    out << j.dump() << "\n";
  }
  out << Json{{"type", "mean"}, {"values", values_json(mean)}}.dump() << "\n";
  Json skipped = Json::array();
  for (const auto& s : summary.skipped) skipped.push_back({{"id", s.id}, {"reason", s.reason}});
  out << Json{{"type", "summary"},
              {"ok", summary.ok},
              {"skipped", summary.skipped.size()},
              {"failed", summary.failed},
              {"skipped_ids", skipped}}
             .dump()
      << "\n";
}

}  // namespace phasecont
