// Copyright 2026 The phasecont Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "phasecont/audio_io.hpp"
#include "phasecont/grid.hpp"

namespace phasecont {

using Complex = std::complex<double>;

// |z| without hypot's overflow guard; spectrogram values are bounded.
inline double Magnitude(Complex z) noexcept {
  return std::sqrt(z.real() * z.real() + z.imag() * z.imag());
}

enum class WindowKind { kHann, kRectangular };

std::string ToString(WindowKind kind);
WindowKind ParseWindowKind(const std::string& name);

struct StftConfig {
  std::size_t fft_size = 512;
  std::size_t hop = 128;
  std::size_t win_length = 512;
  WindowKind window = WindowKind::kHann;

  std::size_t bins() const noexcept { return fft_size / 2 + 1; }
  // Reflection padding applied at each end of the signal.
  std::size_t pad() const noexcept { return win_length / 2; }

  // Throws kInput unless fft_size is a power of two and
  // 0 < hop <= win_length <= fft_size.
  void Validate() const;

  // Overlap-add with window-square normalization reconstructs exactly.
  bool SatisfiesCola() const noexcept;

  friend bool operator==(const StftConfig&, const StftConfig&) = default;
};

// "fft:win:hop[:window]", e.g. "512:240:50" or "8:8:8:rect".
std::string ToString(const StftConfig& cfg);
StftConfig ParseStftConfig(const std::string& text);

struct MultiResConfig {
  std::vector<StftConfig> resolutions;

  // fft {512, 1024, 2048}, win {240, 600, 1200}, hop {50, 120, 240}, Hann.
  static MultiResConfig Default();

  // Throws kInput when empty, when an entry is invalid or on duplicates.
  void Validate() const;

  friend bool operator==(const MultiResConfig&, const MultiResConfig&) = default;
};

std::string ToString(const MultiResConfig& cfg);
MultiResConfig ParseMultiResConfig(const std::string& text);

// Periodic Hann or all-ones window of cfg.win_length samples.
std::vector<double> MakeWindow(const StftConfig& cfg);

// Number of frames for a signal of `length` samples:
// 1 + floor((length + 2 * pad - win_length) / hop).
std::size_t FrameCount(std::size_t length, const StftConfig& cfg);

// Index into a signal of `length` samples for a position of its reflection
// padded extension (numpy "reflect" mode, repeated for long pads).
std::size_t ReflectIndex(std::ptrdiff_t position, std::size_t length) noexcept;

struct ComplexSpectrogram {
  Grid<Complex> values;  // frames x (fft_size / 2 + 1)
  StftConfig config;
  std::size_t source_length = 0;
  int sample_rate = 0;
};

// Reflection-pads by win_length/2, windows each frame, zero-pads it to
// fft_size and keeps the one-sided DFT.
ComplexSpectrogram Stft(std::span<const double> samples, const StftConfig& cfg);
ComplexSpectrogram Stft(const Waveform& w, const StftConfig& cfg);

// Weighted overlap-add inverse trimmed to source_length. Throws
// kUnsupportedConfig for configurations that fail SatisfiesCola().
Waveform Istft(const ComplexSpectrogram& s);

// Transpose of the (real-linear) map samples -> spectrogram. Given
// G = dL/dRe(S) + i dL/dIm(S) returns dL/d(samples).
std::vector<double> StftAdjoint(const Grid<Complex>& grad, const StftConfig& cfg,
                                std::size_t source_length);

}  // namespace phasecont
