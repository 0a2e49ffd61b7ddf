// Copyright 2026 The phasecont Authors
// SPDX-License-Identifier: Apache-2.0

#include "phasecont/error.hpp"

namespace phasecont {

std::string_view ToString(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kFormat: return "format";
    case ErrorKind::kUnsupportedFormat: return "unsupported-format";
    case ErrorKind::kEmptyWaveform: return "empty-waveform";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kInput: return "input";
    case ErrorKind::kUnsupportedConfig: return "unsupported-config";
    case ErrorKind::kTooSmallField: return "too-small-field";
    case ErrorKind::kUndefinedMetric: return "undefined-metric";
    case ErrorKind::kConfig: return "config";
  }
  return "unknown";
}

}  // namespace phasecont
