// Copyright 2026 The phasecont Authors
// SPDX-License-Identifier: Apache-2.0

#include "phasecont/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "phasecont/error.hpp"
#include "phasecont/fft.hpp"

namespace phasecont {
namespace {

std::vector<std::string> Split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    parts.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
  }
  return parts;
}

std::size_t ParseSize(const std::string& s) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw Error(ErrorKind::kConfig, "expected a non-negative integer, got '" + s + "'");
  return static_cast<std::size_t>(v);
}

// Unpacks the spectra of two real frames a, b from X = FFT(a + i b).
void SplitPacked(std::span<const Complex> packed, std::span<Complex> first,
                 std::span<Complex> second) {
  const std::size_t n = packed.size();
  for (std::size_t k = 0; k < first.size(); ++k) {
    const Complex x = packed[k];
    const Complex y = std::conj(packed[(n - k) % n]);
    first[k] = 0.5 * (x + y);
    const Complex d = 0.5 * (x - y);
    second[k] = Complex(d.imag(), -d.real());  // d / i
  }
}

// Fills `full` with the Hermitian extension of a one-sided row; the
// imaginary parts at DC and Nyquist are dropped.
void HermitianExtend(std::span<const Complex> row, double middle_scale,
                     std::span<Complex> full) {
  const std::size_t n = full.size();
  const std::size_t half = n / 2;
  full[0] = row[0].real();
  full[half] = row[half].real();
  for (std::size_t k = 1; k < half; ++k) {
    full[k] = middle_scale * row[k];
    full[n - k] = std::conj(full[k]);
  }
}

// out_a[m] = sum_k Fa[k] e^{+2 pi i k m / N} for the Hermitian extensions of
// two rows, computed with a single complex FFT. Either row may be empty.
void SynthesizePair(const FftPlan& plan, std::span<const Complex> row_a,
                    std::span<const Complex> row_b, double middle_scale,
                    std::vector<Complex>& scratch, std::vector<Complex>& ext,
                    std::span<double> out_a, std::span<double> out_b) {
  const std::size_t n = plan.size();
  std::fill(scratch.begin(), scratch.end(), Complex{});
  HermitianExtend(row_a, middle_scale, ext);
  for (std::size_t m = 0; m < n; ++m) scratch[m] = std::conj(ext[m]);
  if (!row_b.empty()) {
    HermitianExtend(row_b, middle_scale, ext);
    // conj(Fa + i Fb) = conj(Fa) - i conj(Fb)
    for (std::size_t m = 0; m < n; ++m) scratch[m] -= Complex(0.0, 1.0) * std::conj(ext[m]);
  }
  plan.Forward(scratch);
  // conj(FFT(conj(Fa + i Fb))) = ya + i yb with ya, yb real.
  for (std::size_t m = 0; m < out_a.size(); ++m) {
    out_a[m] = scratch[m].real();
    if (!out_b.empty()) out_b[m] = -scratch[m].imag();
  }
}

}  // namespace

std::string ToString(WindowKind kind) {
  return kind == WindowKind::kHann ? "hann" : "rect";
}

WindowKind ParseWindowKind(const std::string& name) {
  if (name == "hann") return WindowKind::kHann;
  if (name == "rect" || name == "rectangular") return WindowKind::kRectangular;
  throw Error(ErrorKind::kConfig, "unknown window '" + name + "'");
}

void StftConfig::Validate() const {
  if (!IsPowerOfTwo(fft_size))
    throw Error(ErrorKind::kInput, "fft_size must be a power of two");
  if (hop == 0 || hop > win_length || win_length > fft_size)
    throw Error(ErrorKind::kInput, "require 0 < hop <= win_length <= fft_size");
}

bool StftConfig::SatisfiesCola() const noexcept {
  if (hop == 0 || hop > win_length) return false;
  return window == WindowKind::kRectangular || hop <= win_length / 2;
}

std::string ToString(const StftConfig& cfg) {
  std::string s = std::to_string(cfg.fft_size) + ":" + std::to_string(cfg.win_length) +
                  ":" + std::to_string(cfg.hop);
  if (cfg.window != WindowKind::kHann) s += ":" + ToString(cfg.window);
  return s;
}

StftConfig ParseStftConfig(const std::string& text) {
  const auto parts = Split(text, ':');
  if (parts.size() != 3 && parts.size() != 4)
    throw Error(ErrorKind::kConfig, "resolution must be fft:win:hop[:window], got '" + text + "'");
  StftConfig cfg;
  cfg.fft_size = ParseSize(parts[0]);
  cfg.win_length = ParseSize(parts[1]);
  cfg.hop = ParseSize(parts[2]);
  if (parts.size() == 4) cfg.window = ParseWindowKind(parts[3]);
  try {
    cfg.Validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::kConfig, "resolution '" + text + "': " + e.what());
  }
  return cfg;
}

MultiResConfig MultiResConfig::Default() {
  return {{{512, 50, 240, WindowKind::kHann},
           {1024, 120, 600, WindowKind::kHann},
           {2048, 240, 1200, WindowKind::kHann}}};
}

void MultiResConfig::Validate() const {
  if (resolutions.empty()) throw Error(ErrorKind::kInput, "no STFT resolutions");
  for (std::size_t i = 0; i < resolutions.size(); ++i) {
    resolutions[i].Validate();
    for (std::size_t j = 0; j < i; ++j) {
      if (resolutions[i] == resolutions[j])
        throw Error(ErrorKind::kInput, "duplicate resolution " + ToString(resolutions[i]));
    }
  }
}

std::string ToString(const MultiResConfig& cfg) {
  std::string s;
  for (const auto& r : cfg.resolutions) {
    if (!s.empty()) s += ",";
    s += ToString(r);
  }
  return s;
}

MultiResConfig ParseMultiResConfig(const std::string& text) {
  MultiResConfig cfg;
  for (const auto& part : Split(text, ',')) {
    if (!part.empty()) cfg.resolutions.push_back(ParseStftConfig(part));
  }
  try {
    cfg.Validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::kConfig, e.what());
  }
  return cfg;
}

std::vector<double> MakeWindow(const StftConfig& cfg) {
  std::vector<double> w(cfg.win_length, 1.0);
  if (cfg.window == WindowKind::kHann) {
    const double n = static_cast<double>(cfg.win_length);
    for (std::size_t m = 0; m < cfg.win_length; ++m)
      w[m] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(m) / n);
  }
  return w;
}

std::size_t FrameCount(std::size_t length, const StftConfig& cfg) {
  const std::size_t padded = length + 2 * cfg.pad();
  if (padded < cfg.win_length) return 0;
  return 1 + (padded - cfg.win_length) / cfg.hop;
}

std::size_t ReflectIndex(std::ptrdiff_t position, std::size_t length) noexcept {
  if (length <= 1) return 0;
  const auto period = static_cast<std::ptrdiff_t>(2 * (length - 1));
  std::ptrdiff_t i = position % period;
  if (i < 0) i += period;
  if (i >= static_cast<std::ptrdiff_t>(length)) i = period - i;
  return static_cast<std::size_t>(i);
}

ComplexSpectrogram Stft(std::span<const double> samples, const StftConfig& cfg) {
  cfg.Validate();
  if (samples.empty()) throw Error(ErrorKind::kInput, "stft: empty input");
  for (double x : samples) {
    if (!std::isfinite(x)) throw Error(ErrorKind::kInput, "stft: non-finite sample");
  }

  const std::size_t n = cfg.fft_size;
  const std::size_t frames = FrameCount(samples.size(), cfg);
  const auto window = MakeWindow(cfg);
  const auto pad = static_cast<std::ptrdiff_t>(cfg.pad());
  const FftPlan plan(n);

  ComplexSpectrogram out;
  out.values = Grid<Complex>(frames, cfg.bins());
  out.config = cfg;
  out.source_length = samples.size();

  auto frame_sample = [&](std::size_t t, std::size_t m) {
    const auto pos = static_cast<std::ptrdiff_t>(t * cfg.hop + m) - pad;
    return window[m] * samples[ReflectIndex(pos, samples.size())];
  };

  std::vector<Complex> buf(n);
  for (std::size_t t = 0; t < frames; t += 2) {
    const bool pair = t + 1 < frames;
    std::fill(buf.begin(), buf.end(), Complex{});
    for (std::size_t m = 0; m < cfg.win_length; ++m) {
      buf[m] = Complex(frame_sample(t, m), pair ? frame_sample(t + 1, m) : 0.0);
    }
    plan.Forward(buf);
    if (pair) {
      SplitPacked(buf, out.values.row(t), out.values.row(t + 1));
    } else {
      auto row = out.values.row(t);
      std::copy_n(buf.begin(), row.size(), row.begin());
      row[0].imag(0.0);
      row[n / 2].imag(0.0);
    }
  }
  return out;
}

ComplexSpectrogram Stft(const Waveform& w, const StftConfig& cfg) {
  auto s = Stft(std::span<const double>(w.samples), cfg);
  s.sample_rate = w.sample_rate;
  return s;
}

Waveform Istft(const ComplexSpectrogram& s) {
  const StftConfig& cfg = s.config;
  cfg.Validate();
  if (!cfg.SatisfiesCola())
    throw Error(ErrorKind::kUnsupportedConfig,
                "istft: configuration " + ToString(cfg) + " violates overlap-add");
  if (s.values.frames() != FrameCount(s.source_length, cfg) || s.values.bins() != cfg.bins())
    throw Error(ErrorKind::kInput, "istft: spectrogram shape does not match its config");

  const std::size_t n = cfg.fft_size;
  const std::size_t frames = s.values.frames();
  const auto window = MakeWindow(cfg);
  const std::size_t padded = s.source_length + 2 * cfg.pad();
  std::vector<double> acc(padded, 0.0);
  std::vector<double> norm(padded, 0.0);

  const FftPlan plan(n);
  std::vector<Complex> scratch(n), ext(n);
  std::vector<double> ya(n), yb(n);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t t = 0; t < frames; t += 2) {
    const bool pair = t + 1 < frames;
    SynthesizePair(plan, s.values.row(t),
                   pair ? s.values.row(t + 1) : std::span<const Complex>{}, 1.0, scratch,
                   ext, ya, pair ? std::span<double>(yb) : std::span<double>{});
    for (std::size_t f = 0; f < (pair ? 2U : 1U); ++f) {
      const auto& y = f == 0 ? ya : yb;
      const std::size_t start = (t + f) * cfg.hop;
      for (std::size_t m = 0; m < cfg.win_length; ++m) {
        acc[start + m] += window[m] * y[m] * scale;
        norm[start + m] += window[m] * window[m];
      }
    }
  }

  Waveform out;
  out.sample_rate = s.sample_rate > 0 ? s.sample_rate : 16000;
  out.samples.resize(s.source_length);
  for (std::size_t i = 0; i < s.source_length; ++i) {
    const double d = norm[cfg.pad() + i];
    if (d < 1e-12)
      throw Error(ErrorKind::kUnsupportedConfig, "istft: sample not covered by any window");
    out.samples[i] = acc[cfg.pad() + i] / d;
  }
  return out;
}

std::vector<double> StftAdjoint(const Grid<Complex>& grad, const StftConfig& cfg,
                                std::size_t source_length) {
  cfg.Validate();
  if (source_length == 0) throw Error(ErrorKind::kInput, "stft_adjoint: zero source length");
  if (grad.frames() != FrameCount(source_length, cfg) || grad.bins() != cfg.bins())
    throw Error(ErrorKind::kInput, "stft_adjoint: gradient grid shape mismatch");

  const std::size_t n = cfg.fft_size;
  const auto window = MakeWindow(cfg);
  const auto pad = static_cast<std::ptrdiff_t>(cfg.pad());
  const FftPlan plan(n);
  std::vector<Complex> scratch(n), ext(n);
  std::vector<double> ya(n), yb(n);
  std::vector<double> out(source_length, 0.0);

  // d/dx[m] of Re(sum_{k<=N/2} G_k e^{-i phi}) pairs each interior bin with
  // its mirror, hence the 1/2 on interior bins of the Hermitian extension.
  for (std::size_t t = 0; t < grad.frames(); t += 2) {
    const bool pair = t + 1 < grad.frames();
    SynthesizePair(plan, grad.row(t), pair ? grad.row(t + 1) : std::span<const Complex>{},
                   0.5, scratch, ext, ya, pair ? std::span<double>(yb) : std::span<double>{});
    for (std::size_t f = 0; f < (pair ? 2U : 1U); ++f) {
      const auto& y = f == 0 ? ya : yb;
      const std::size_t start = (t + f) * cfg.hop;
      for (std::size_t m = 0; m < cfg.win_length; ++m) {
        const auto pos = static_cast<std::ptrdiff_t>(start + m) - pad;
        out[ReflectIndex(pos, source_length)] += window[m] * y[m];
      }
    }
  }
  return out;
}

}  // namespace phasecont
