// Copyright 2026 The phasecont Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "phasecont/audio_io.hpp"
#include "phasecont/grid.hpp"
#include "phasecont/spectral.hpp"

namespace phasecont {

inline constexpr double kSnrFloorDb = -10.0;
inline constexpr double kSnrCeilingDb = 35.0;
// Frames whose clean energy is at or below this fraction of the mean frame
// energy are silent and excluded from segmental averages.
inline constexpr double kSilenceFloor = 1e-8;

// Segmental SNR over non-overlapping (by default) frames, each clamped to
// [-10, 35] dB. nullopt when every frame is silent.
std::optional<double> SnrSeg(std::span<const double> clean, std::span<const double> enhanced,
                             std::size_t frame = 320, std::size_t hop = 320);

struct BandSpec {
  std::size_t bands = 25;
  double min_hz = 50.0;
  double max_hz = 8000.0;  // clipped to Nyquist
  double weight_exponent = 0.2;

  friend bool operator==(const BandSpec&, const BandSpec&) = default;
};

// Triangular mel-spaced filterbank: bands x (fft_size / 2 + 1) weights.
Grid<double> MelFilterbank(const BandSpec& spec, std::size_t fft_size, int sample_rate);

// Frequency-weighted segmental SNR: per frame, band SNRs (clamped to
// [-10, 35] dB) averaged with weights (clean band magnitude)^exponent.
std::optional<double> FwSnrSeg(std::span<const double> clean, std::span<const double> enhanced,
                               int sample_rate, const StftConfig& cfg, const BandSpec& bands = {});

// Whole-utterance SDR in dB; +infinity when enhanced equals clean. Throws
// kInput for an all-zero clean signal.
double Sdr(std::span<const double> clean, std::span<const double> enhanced);

// sdr(clean, enhanced) - sdr(clean, noisy), evaluated as the log ratio of the
// two error energies so that enhanced == noisy gives exactly 0.
double Sdri(std::span<const double> clean, std::span<const double> enhanced,
            std::span<const double> noisy);

struct VoicingOptions {
  double energy_gate = 0.03;  // fraction of the loudest frame's RMS
  double periodicity = 0.45;  // normalized autocorrelation peak
  double f0_min_hz = 50.0;
  double f0_max_hz = 400.0;

  friend bool operator==(const VoicingOptions&, const VoicingOptions&) = default;
};

struct VoicedMask {
  std::vector<bool> voiced;  // one entry per frame of the STFT grid

  std::size_t count() const;
};

// Frames follow the STFT grid of `cfg` (same reflection padding). A frame is
// voiced when it passes the energy gate and its mean-removed normalized
// autocorrelation peaks above the periodicity threshold for a lag within the
// f0 range. Lags are limited to three quarters of the frame.
VoicedMask ComputeVoicedMask(const Waveform& clean, const StftConfig& cfg,
                             const VoicingOptions& options = {});

struct PhaseMetrics {
  double unrmse = 0.0;   // radians
  double gd_rmse = 0.0;  // wrapped radians / 2 pi
  double if_rmse = 0.0;  // wrapped radians / 2 pi
  std::size_t voiced_frames = 0;
};

// RMS phase errors over voiced frames and bins active in both spectrograms.
// The unwrapped phase runs along frequency within each frame. GD skips the
// first bin and IF the first frame, whose derivatives are zero by definition.
// nullopt when nothing is voiced.
std::optional<PhaseMetrics> ComputePhaseMetrics(const Grid<Complex>& clean,
                                                const Grid<Complex>& enhanced,
                                                const VoicedMask& mask);
std::optional<PhaseMetrics> ComputePhaseMetrics(std::span<const double> clean,
                                                std::span<const double> enhanced,
                                                const StftConfig& cfg, const VoicedMask& mask);

struct MetricOptions {
  std::size_t snr_frame = 320;
  std::size_t snr_hop = 320;
  StftConfig fw_stft{512, 120, 480, WindowKind::kHann};
  BandSpec bands;
  StftConfig phase_stft{512, 128, 512, WindowKind::kHann};
  VoicingOptions voicing;

  friend bool operator==(const MetricOptions&, const MetricOptions&) = default;
};

struct MetricReport {
  std::optional<double> snrseg;
  std::optional<double> fwsnrseg;
  double sdr = 0.0;
  std::optional<double> sdri;  // only with a noisy signal
  std::optional<double> unrmse;
  std::optional<double> gd_rmse;
  std::optional<double> if_rmse;
  std::size_t voiced_frame_count = 0;
};

MetricReport ComputeMetrics(const Waveform& clean, const Waveform& enhanced,
                            const Waveform* noisy, const MetricOptions& options = {});

}  // namespace phasecont
