// Copyright 2026 The phasecont Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace phasecont {

enum class ErrorKind {
  kFormat,             // malformed WAV header or chunk layout
  kUnsupportedFormat,  // valid RIFF but an encoding we do not decode
  kEmptyWaveform,
  kIo,
  kInput,              // shape, length or finiteness violations
  kUnsupportedConfig,  // e.g. a non-COLA configuration handed to istft
  kTooSmallField,      // phase field smaller than 3x3
  kUndefinedMetric,
  kConfig,             // run configuration rejected before processing
};

std::string_view ToString(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace phasecont
