// Copyright 2026 The phasecont Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "phasecont/grid.hpp"
#include "phasecont/spectral.hpp"

namespace phasecont {

// Bins whose magnitude is at or below this value carry no phase: their
// (cos, sin) image is (0, 0).
inline constexpr double kMagnitudeEpsilon = 1e-8;

// Maps x to (-pi, pi].
double PrincipalValue(double x) noexcept;

// Wrapped phase of every bin as its (cos, sin) image.
struct PhaseField {
  Grid<double> cos_vals;
  Grid<double> sin_vals;
  Grid<double> magnitude;
  StftConfig config;

  std::size_t frames() const noexcept { return cos_vals.frames(); }
  std::size_t bins() const noexcept { return cos_vals.bins(); }
};

// cos = Re/|z|, sin = Im/|z| without extracting the angle.
PhaseField ComputePhaseField(const ComplexSpectrogram& s);
PhaseField ComputePhaseField(const Grid<Complex>& values, const StftConfig& cfg = {});

// 3x3 neighbourhood differences f(neighbour) - f(center), f in {cos, sin},
// for every interior center. Within a block, row 0 holds frequency offset +1
// and row 2 offset -1; column 0 holds time offset -1 and column 2 offset +1.
// The center entry is always zero.
class KernelStack {
 public:
  using Block = std::array<std::array<double, 3>, 3>;

  KernelStack() = default;
  KernelStack(std::size_t centers_t, std::size_t centers_k);

  // Interior centers along time (T - 2) and frequency (K - 2).
  std::size_t centers_t() const noexcept { return centers_t_; }
  std::size_t centers_k() const noexcept { return centers_k_; }

  // Block for the center at frame n + 1, bin k + 1.
  Block& cos_block(std::size_t n, std::size_t k) { return cos_[n * centers_k_ + k]; }
  Block& sin_block(std::size_t n, std::size_t k) { return sin_[n * centers_k_ + k]; }
  const Block& cos_block(std::size_t n, std::size_t k) const {
    return cos_[n * centers_k_ + k];
  }
  const Block& sin_block(std::size_t n, std::size_t k) const {
    return sin_[n * centers_k_ + k];
  }

  // Time and frequency offsets addressed by a block entry.
  static constexpr int TimeOffset(std::size_t col) noexcept { return static_cast<int>(col) - 1; }
  static constexpr int FreqOffset(std::size_t row) noexcept { return 1 - static_cast<int>(row); }

 private:
  std::size_t centers_t_ = 0;
  std::size_t centers_k_ = 0;
  std::vector<Block> cos_;
  std::vector<Block> sin_;
};

// Throws kTooSmallField unless the field has at least 3 frames and 3 bins.
KernelStack ContinuityKernel(const PhaseField& p);

enum class Axis { kTime, kFrequency };

// One-dimensional unwrapping: the first element keeps its wrapped angle and
// each later element adds the principal-value increment from the last bin
// above epsilon. Bins at or below epsilon repeat the previous value.
Grid<double> UnwrapPhase(const Grid<Complex>& values, Axis axis);
Grid<double> UnwrapPhase(const ComplexSpectrogram& s, Axis axis);

// Wrapped frame-to-frame (IF) and bin-to-bin (GD) phase increments. The first
// frame of if_vals and the first bin of gd_vals are zero. Bins at or below
// epsilon count as angle 0.
struct DerivativeField {
  Grid<double> if_vals;
  Grid<double> gd_vals;
};

DerivativeField DerivativeFields(const Grid<Complex>& values);
DerivativeField DerivativeFields(const ComplexSpectrogram& s);

}  // namespace phasecont
