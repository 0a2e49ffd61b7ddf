// Copyright 2026 The phasecont Authors
// SPDX-License-Identifier: Apache-2.0

#include "phasecont/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "phasecont/error.hpp"
#include "phasecont/phase.hpp"

namespace phasecont {
namespace {

void CheckPair(std::span<const double> a, std::span<const double> b, const char* what) {
  if (a.size() != b.size())
    throw Error(ErrorKind::kInput, std::string(what) + ": length mismatch");
  if (a.empty()) throw Error(ErrorKind::kInput, std::string(what) + ": empty input");
}

double ClampedDb(double signal, double noise) {
  if (noise == 0.0) return kSnrCeilingDb;
  if (signal == 0.0) return kSnrFloorDb;
  return std::clamp(10.0 * std::log10(signal / noise), kSnrFloorDb, kSnrCeilingDb);
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

}  // namespace

std::optional<double> SnrSeg(std::span<const double> clean, std::span<const double> enhanced,
                             std::size_t frame, std::size_t hop) {
  CheckPair(clean, enhanced, "snrseg");
  if (frame == 0 || hop == 0) throw Error(ErrorKind::kInput, "snrseg: zero frame or hop");
  const std::size_t n = clean.size();
  const std::size_t len = std::min(frame, n);
  const std::size_t frames = 1 + (n - len) / hop;

  std::vector<double> signal(frames), noise(frames);
  double total = 0.0;
  for (std::size_t f = 0; f < frames; ++f) {
    for (std::size_t i = f * hop; i < f * hop + len; ++i) {
      signal[f] += clean[i] * clean[i];
      noise[f] += (clean[i] - enhanced[i]) * (clean[i] - enhanced[i]);
    }
    total += signal[f];
  }
  const double floor = kSilenceFloor * total / static_cast<double>(frames);
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t f = 0; f < frames; ++f) {
    if (signal[f] <= floor) continue;
    sum += ClampedDb(signal[f], noise[f]);
    ++used;
  }
  if (used == 0) return std::nullopt;
  return sum / static_cast<double>(used);
}

Grid<double> MelFilterbank(const BandSpec& spec, std::size_t fft_size, int sample_rate) {
  if (spec.bands == 0 || sample_rate <= 0 || spec.min_hz < 0.0)
    throw Error(ErrorKind::kInput, "filterbank: invalid band specification");
  const double nyquist = sample_rate / 2.0;
  const double hi = std::min(spec.max_hz, nyquist);
  if (spec.min_hz >= hi) throw Error(ErrorKind::kInput, "filterbank: empty frequency range");

  const double mel_lo = HzToMel(spec.min_hz);
  const double mel_hi = HzToMel(hi);
  std::vector<double> edges(spec.bands + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = MelToHz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                    static_cast<double>(spec.bands + 1));
  }

  const std::size_t bins = fft_size / 2 + 1;
  Grid<double> fb(spec.bands, bins);
  for (std::size_t b = 0; b < spec.bands; ++b) {
    const double left = edges[b];
    const double center = edges[b + 1];
    const double right = edges[b + 2];
    for (std::size_t k = 0; k < bins; ++k) {
      const double hz = static_cast<double>(k) * sample_rate / static_cast<double>(fft_size);
      double w = 0.0;
      if (hz > left && hz <= center) {
        w = (hz - left) / (center - left);
      } else if (hz > center && hz < right) {
        w = (right - hz) / (right - center);
      }
      fb(b, k) = w;
    }
  }
  return fb;
}

std::optional<double> FwSnrSeg(std::span<const double> clean, std::span<const double> enhanced,
                               int sample_rate, const StftConfig& cfg, const BandSpec& bands) {
  CheckPair(clean, enhanced, "fwsnrseg");
  const auto sc = Stft(clean, cfg);
  const auto se = Stft(enhanced, cfg);
  const Grid<double> fb = MelFilterbank(bands, cfg.fft_size, sample_rate);
  const std::size_t frames = sc.values.frames();
  const std::size_t bins = sc.values.bins();

  std::vector<double> energy(frames, 0.0);
  double total = 0.0;
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t k = 0; k < bins; ++k) energy[t] += std::norm(sc.values(t, k));
    total += energy[t];
  }
  const double floor = kSilenceFloor * total / static_cast<double>(frames);

  double sum = 0.0;
  std::size_t used = 0;
  std::vector<double> clean_band(fb.frames()), enh_band(fb.frames());
  for (std::size_t t = 0; t < frames; ++t) {
    if (energy[t] <= floor) continue;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t b = 0; b < fb.frames(); ++b) {
      double cb = 0.0;
      double eb = 0.0;
      for (std::size_t k = 0; k < bins; ++k) {
        cb += fb(b, k) * Magnitude(sc.values(t, k));
        eb += fb(b, k) * Magnitude(se.values(t, k));
      }
      const double weight = std::pow(cb, bands.weight_exponent);
      if (cb == 0.0) continue;
      num += weight * ClampedDb(cb * cb, (cb - eb) * (cb - eb));
      den += weight;
    }
    if (den == 0.0) continue;
    sum += num / den;
    ++used;
  }
  if (used == 0) return std::nullopt;
  return sum / static_cast<double>(used);
}

double Sdr(std::span<const double> clean, std::span<const double> enhanced) {
  CheckPair(clean, enhanced, "sdr");
  double signal = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    signal += clean[i] * clean[i];
    error += (clean[i] - enhanced[i]) * (clean[i] - enhanced[i]);
  }
  if (signal == 0.0) throw Error(ErrorKind::kInput, "sdr: all-zero clean signal");
  if (error == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(signal / error);
}

double Sdri(std::span<const double> clean, std::span<const double> enhanced,
            std::span<const double> noisy) {
  CheckPair(clean, enhanced, "sdri");
  CheckPair(clean, noisy, "sdri");
  double signal = 0.0;
  double enh_error = 0.0;
  double noisy_error = 0.0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    signal += clean[i] * clean[i];
    enh_error += (clean[i] - enhanced[i]) * (clean[i] - enhanced[i]);
    noisy_error += (clean[i] - noisy[i]) * (clean[i] - noisy[i]);
  }
  if (signal == 0.0) throw Error(ErrorKind::kInput, "sdri: all-zero clean signal");
  if (enh_error == noisy_error) return 0.0;
  if (enh_error == 0.0) return std::numeric_limits<double>::infinity();
  if (noisy_error == 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(noisy_error / enh_error);
}

std::size_t VoicedMask::count() const {
  return static_cast<std::size_t>(std::count(voiced.begin(), voiced.end(), true));
}

VoicedMask ComputeVoicedMask(const Waveform& clean, const StftConfig& cfg,
                             const VoicingOptions& options) {
  ValidateWaveform(clean, "voiced_mask");
  cfg.Validate();
  const std::size_t n = clean.size();
  const std::size_t frames = FrameCount(n, cfg);
  const std::size_t win = cfg.win_length;
  const auto pad = static_cast<std::ptrdiff_t>(cfg.pad());

  const double rate = clean.sample_rate;
  const auto min_lag = static_cast<std::size_t>(std::ceil(rate / options.f0_max_hz));
  const std::size_t max_lag =
      std::min(static_cast<std::size_t>(std::floor(rate / options.f0_min_hz)), win - win / 4);

  std::vector<double> rms(frames, 0.0);
  std::vector<double> peak(frames, 0.0);
  std::vector<double> x(win);
  for (std::size_t t = 0; t < frames; ++t) {
    double mean = 0.0;
    for (std::size_t m = 0; m < win; ++m) {
      const auto pos = static_cast<std::ptrdiff_t>(t * cfg.hop + m) - pad;
      x[m] = clean.samples[ReflectIndex(pos, n)];
      mean += x[m];
    }
    mean /= static_cast<double>(win);
    double energy = 0.0;
    for (std::size_t m = 0; m < win; ++m) energy += x[m] * x[m];
    rms[t] = std::sqrt(energy / static_cast<double>(win));

    for (auto& v : x) v -= mean;
    for (std::size_t lag = std::max<std::size_t>(min_lag, 1); lag <= max_lag; ++lag) {
      double cross = 0.0;
      double e0 = 0.0;
      double e1 = 0.0;
      for (std::size_t m = 0; m + lag < win; ++m) {
        cross += x[m] * x[m + lag];
        e0 += x[m] * x[m];
        e1 += x[m + lag] * x[m + lag];
      }
      if (e0 > 0.0 && e1 > 0.0) peak[t] = std::max(peak[t], cross / std::sqrt(e0 * e1));
    }
  }

  const double loudest = frames ? *std::max_element(rms.begin(), rms.end()) : 0.0;
  VoicedMask mask;
  mask.voiced.resize(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    mask.voiced[t] = rms[t] > options.energy_gate * loudest && peak[t] > options.periodicity;
  }
  return mask;
}

std::optional<PhaseMetrics> ComputePhaseMetrics(const Grid<Complex>& clean,
                                                const Grid<Complex>& enhanced,
                                                const VoicedMask& mask) {
  if (!clean.same_shape(enhanced))
    throw Error(ErrorKind::kInput, "phase_metrics: spectrogram shape mismatch");
  if (mask.voiced.size() != clean.frames())
    throw Error(ErrorKind::kInput, "phase_metrics: voiced mask not aligned with frames");
  if (mask.count() == 0) return std::nullopt;

  const Grid<double> uc = UnwrapPhase(clean, Axis::kFrequency);
  const Grid<double> ue = UnwrapPhase(enhanced, Axis::kFrequency);
  const DerivativeField dc = DerivativeFields(clean);
  const DerivativeField de = DerivativeFields(enhanced);

  double un_sum = 0.0, gd_sum = 0.0, if_sum = 0.0;
  std::size_t un_n = 0, gd_n = 0, if_n = 0;
  for (std::size_t t = 0; t < clean.frames(); ++t) {
    if (!mask.voiced[t]) continue;
    for (std::size_t k = 0; k < clean.bins(); ++k) {
      if (Magnitude(clean(t, k)) <= kMagnitudeEpsilon ||
          Magnitude(enhanced(t, k)) <= kMagnitudeEpsilon)
        continue;
      const double du = uc(t, k) - ue(t, k);
      un_sum += du * du;
      ++un_n;
      if (k > 0) {
        const double d = PrincipalValue(dc.gd_vals(t, k) - de.gd_vals(t, k));
        gd_sum += d * d;
        ++gd_n;
      }
      if (t > 0) {
        const double d = PrincipalValue(dc.if_vals(t, k) - de.if_vals(t, k));
        if_sum += d * d;
        ++if_n;
      }
    }
  }
  if (un_n == 0) return std::nullopt;

  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  PhaseMetrics out;
  out.voiced_frames = mask.count();
  out.unrmse = std::sqrt(un_sum / static_cast<double>(un_n));
  out.gd_rmse = gd_n ? std::sqrt(gd_sum / static_cast<double>(gd_n)) / kTwoPi : 0.0;
  out.if_rmse = if_n ? std::sqrt(if_sum / static_cast<double>(if_n)) / kTwoPi : 0.0;
  return out;
}

std::optional<PhaseMetrics> ComputePhaseMetrics(std::span<const double> clean,
                                                std::span<const double> enhanced,
                                                const StftConfig& cfg, const VoicedMask& mask) {
  CheckPair(clean, enhanced, "phase_metrics");
  return ComputePhaseMetrics(Stft(clean, cfg).values, Stft(enhanced, cfg).values, mask);
}

MetricReport ComputeMetrics(const Waveform& clean, const Waveform& enhanced,
                            const Waveform* noisy, const MetricOptions& options) {
  ValidateWaveform(clean, "clean");
  ValidateWaveform(enhanced, "enhanced");
  if (clean.sample_rate != enhanced.sample_rate)
    throw Error(ErrorKind::kInput, "metrics: sample rate mismatch");

  MetricReport r;
  r.snrseg = SnrSeg(clean.samples, enhanced.samples, options.snr_frame, options.snr_hop);
  r.fwsnrseg = FwSnrSeg(clean.samples, enhanced.samples, clean.sample_rate, options.fw_stft,
                        options.bands);
  r.sdr = Sdr(clean.samples, enhanced.samples);
  if (noisy) {
    ValidateWaveform(*noisy, "noisy");
    if (noisy->sample_rate != clean.sample_rate)
      throw Error(ErrorKind::kInput, "metrics: sample rate mismatch");
    r.sdri = Sdri(clean.samples, enhanced.samples, noisy->samples);
  }
  const VoicedMask mask = ComputeVoicedMask(clean, options.phase_stft, options.voicing);
  r.voiced_frame_count = mask.count();
  if (const auto pm =
          ComputePhaseMetrics(clean.samples, enhanced.samples, options.phase_stft, mask)) {
    r.unrmse = pm->unrmse;
    r.gd_rmse = pm->gd_rmse;
    r.if_rmse = pm->if_rmse;
  }
  return r;
}

}  // namespace phasecont
