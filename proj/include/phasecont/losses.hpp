// Copyright 2026 The phasecont Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "phasecont/grid.hpp"
#include "phasecont/spectral.hpp"

namespace phasecont {

// Offset inside the logarithm of the log-magnitude term.
inline constexpr double kLogMagnitudeDelta = 1e-7;

enum class GradientMode { kSkip, kCompute };

// A scalar loss together with d(loss)/d(enhanced samples). The gradient is
// empty when it was not requested.
struct TermResult {
  double value = 0.0;
  std::vector<double> gradient;
  bool degenerate = false;  // e.g. phase loss without a single active bin
};

// Same, with the gradient with respect to the enhanced spectrogram
// (dL/dRe + i dL/dIm per bin).
struct SpectralTerm {
  double value = 0.0;
  Grid<Complex> gradient;
  std::size_t active_bins = 0;
  bool degenerate = false;
};

// Mean absolute difference. Gradient sign(enhanced - target) / N with a zero
// subgradient at ties.
TermResult L1Loss(std::span<const double> target, std::span<const double> enhanced,
                  GradientMode mode = GradientMode::kCompute);

// Spectral convergence ||M - M^||_F / ||M||_F and mean |log(M + d) - log(M^ + d)|
// for one resolution. Throws kUndefinedMetric if the target magnitude is zero.
struct MagnitudeTerms {
  SpectralTerm spectral_convergence;
  SpectralTerm log_magnitude;
};
MagnitudeTerms MagnitudeLossOnSpectra(const Grid<Complex>& target,
                                      const Grid<Complex>& enhanced, GradientMode mode);

struct ResolutionMagnitudeLoss {
  TermResult spectral_convergence;
  TermResult log_magnitude;
};
std::vector<ResolutionMagnitudeLoss> MultiResStftLoss(std::span<const double> target,
                                                      std::span<const double> enhanced,
                                                      const MultiResConfig& cfg,
                                                      GradientMode mode = GradientMode::kCompute);

enum class PhaseLossMode {
  // Squared distance between the (cos, sin) images of target and enhanced.
  kWrapped,
  // Compares the target-vs-noisy phase difference with the target-vs-enhanced
  // difference through their (cos, sin) images. Requires a noisy signal.
  kNoisyReferenced,
};

// Mean over active bins (magnitude above epsilon in every participating
// spectrogram) of (cos - cos^)^2 + (sin - sin^)^2. With no active bins the
// value is 0 and `degenerate` is set.
SpectralTerm PhaseLossOnSpectra(const Grid<Complex>& target, const Grid<Complex>& enhanced,
                                GradientMode mode, const Grid<Complex>* noisy = nullptr);

TermResult PhaseLoss(std::span<const double> target, std::span<const double> enhanced,
                     const StftConfig& cfg, GradientMode mode = GradientMode::kCompute,
                     PhaseLossMode phase_mode = PhaseLossMode::kWrapped,
                     std::span<const double> noisy = {});

// Mean over all 9 entries of every interior kernel block of the squared
// difference between target and enhanced continuity kernels, summed over the
// cos and sin kernels. Throws kTooSmallField below 3x3 bins.
SpectralTerm PhaseContinuityLossOnSpectra(const Grid<Complex>& target,
                                          const Grid<Complex>& enhanced, GradientMode mode);

TermResult PhaseContinuityLoss(std::span<const double> target,
                               std::span<const double> enhanced, const StftConfig& cfg,
                               GradientMode mode = GradientMode::kCompute);

struct LossWeights {
  double lambda0 = 0.01;   // L1
  double lambda1 = 1.0;    // multi-resolution STFT magnitude
  double lambda2 = 0.1;    // phase group
  double lambda_p = 1.0;   // phase loss within the group
  double lambda_pc = 0.5;  // phase continuity loss within the group

  // 0.02 : 1 : 1, phase group = phase loss only.
  static LossWeights PhaseLossOnly();
  // 0.01 : 1 : 0.1 with 1 : 0.5 between phase loss and continuity loss.
  static LossWeights PhaseLossAndContinuity();

  // Throws kConfig on negative or non-finite weights or if all are zero.
  void Validate() const;

  friend bool operator==(const LossWeights&, const LossWeights&) = default;
};

struct ResolutionLoss {
  StftConfig config;
  double spectral_convergence = 0.0;
  double log_magnitude = 0.0;
  double phase = 0.0;
  double phase_continuity = 0.0;
  bool phase_degenerate = false;
};

struct LossReport {
  double l1 = 0.0;
  std::vector<ResolutionLoss> resolutions;
  // Resolution means.
  double stft = 0.0;   // mean of sc + log_mag
  double phase = 0.0;  // mean of lambda_p * pl + lambda_pc * pcl
  double total = 0.0;  // lambda0 * l1 + lambda1 * stft + lambda2 * phase
};

struct TotalLossResult {
  LossReport report;
  std::vector<double> gradient;  // d(total)/d(enhanced); empty if skipped
};

struct TotalLossOptions {
  PhaseLossMode phase_mode = PhaseLossMode::kWrapped;
  GradientMode gradient = GradientMode::kCompute;
};

// Weighted sum of all training criteria. Terms are averaged over the
// resolutions in order, so results do not depend on scheduling.
TotalLossResult TotalLoss(std::span<const double> target, std::span<const double> enhanced,
                          std::span<const double> noisy, const LossWeights& weights,
                          const MultiResConfig& cfg, const TotalLossOptions& options = {});

}  // namespace phasecont
