// Copyright 2026 The phasecont Authors
// SPDX-License-Identifier: Apache-2.0

#include "phasecont/phase.hpp"

#include <cmath>
#include <numbers>

#include "phasecont/error.hpp"

namespace phasecont {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double WrappedAngle(Complex z) {
  return Magnitude(z) > kMagnitudeEpsilon ? std::arg(z) : 0.0;
}

void CheckFinite(const Grid<Complex>& values) {
  for (const Complex& z : values.flat()) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw Error(ErrorKind::kInput, "non-finite spectrogram value");
  }
}

}  // namespace

double PrincipalValue(double x) noexcept {
  double r = x - kTwoPi * std::ceil((x - std::numbers::pi) / kTwoPi);
  if (r > std::numbers::pi) r -= kTwoPi;
  if (r <= -std::numbers::pi) r += kTwoPi;
  return r;
}

PhaseField ComputePhaseField(const Grid<Complex>& values, const StftConfig& cfg) {
  CheckFinite(values);
  PhaseField p;
  p.config = cfg;
  p.cos_vals = Grid<double>(values.frames(), values.bins());
  p.sin_vals = Grid<double>(values.frames(), values.bins());
  p.magnitude = Grid<double>(values.frames(), values.bins());
  const auto in = values.flat();
  auto c = p.cos_vals.flat();
  auto s = p.sin_vals.flat();
  auto m = p.magnitude.flat();
  for (std::size_t i = 0; i < in.size(); ++i) {
    const double mag = Magnitude(in[i]);
    m[i] = mag;
    if (mag > kMagnitudeEpsilon) {
      c[i] = in[i].real() / mag;
      s[i] = in[i].imag() / mag;
    }
  }
  return p;
}

PhaseField ComputePhaseField(const ComplexSpectrogram& s) {
  return ComputePhaseField(s.values, s.config);
}

KernelStack::KernelStack(std::size_t centers_t, std::size_t centers_k)
    : centers_t_(centers_t),
      centers_k_(centers_k),
      cos_(centers_t * centers_k, Block{}),
      sin_(centers_t * centers_k, Block{}) {}

KernelStack ContinuityKernel(const PhaseField& p) {
  const std::size_t frames = p.frames();
  const std::size_t bins = p.bins();
  if (frames < 3 || bins < 3)
    throw Error(ErrorKind::kTooSmallField,
                "continuity kernel needs at least 3x3 bins, got " + std::to_string(frames) +
                    "x" + std::to_string(bins));

  KernelStack out(frames - 2, bins - 2);
  for (std::size_t n = 1; n + 1 < frames; ++n) {
    for (std::size_t k = 1; k + 1 < bins; ++k) {
      auto& cb = out.cos_block(n - 1, k - 1);
      auto& sb = out.sin_block(n - 1, k - 1);
      const double c0 = p.cos_vals(n, k);
      const double s0 = p.sin_vals(n, k);
      for (std::size_t row = 0; row < 3; ++row) {
        const std::size_t kk = k + 1 - row;
        for (std::size_t col = 0; col < 3; ++col) {
          const std::size_t nn = n + col - 1;
          cb[row][col] = p.cos_vals(nn, kk) - c0;
          sb[row][col] = p.sin_vals(nn, kk) - s0;
        }
      }
    }
  }
  return out;
}

Grid<double> UnwrapPhase(const Grid<Complex>& values, Axis axis) {
  CheckFinite(values);
  const std::size_t frames = values.frames();
  const std::size_t bins = values.bins();
  Grid<double> out(frames, bins);
  const bool along_time = axis == Axis::kTime;
  const std::size_t lines = along_time ? bins : frames;
  const std::size_t length = along_time ? frames : bins;
  for (std::size_t line = 0; line < lines; ++line) {
    auto at = [&](std::size_t i) -> std::pair<std::size_t, std::size_t> {
      return along_time ? std::pair{i, line} : std::pair{line, i};
    };
    if (length == 0) continue;
    auto [t0, k0] = at(0);
    double reference = WrappedAngle(values(t0, k0));
    double unwrapped = reference;
    out(t0, k0) = unwrapped;
    for (std::size_t i = 1; i < length; ++i) {
      auto [t, k] = at(i);
      const Complex z = values(t, k);
      if (Magnitude(z) > kMagnitudeEpsilon) {
        const double angle = std::arg(z);
        unwrapped += PrincipalValue(angle - reference);
        reference = angle;
      }
      out(t, k) = unwrapped;
    }
  }
  return out;
}

Grid<double> UnwrapPhase(const ComplexSpectrogram& s, Axis axis) {
  return UnwrapPhase(s.values, axis);
}

DerivativeField DerivativeFields(const Grid<Complex>& values) {
  CheckFinite(values);
  const std::size_t frames = values.frames();
  const std::size_t bins = values.bins();
  Grid<double> angle(frames, bins);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t k = 0; k < bins; ++k) angle(t, k) = WrappedAngle(values(t, k));
  }
  DerivativeField d{Grid<double>(frames, bins), Grid<double>(frames, bins)};
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t k = 0; k < bins; ++k) {
      if (t > 0) d.if_vals(t, k) = PrincipalValue(angle(t, k) - angle(t - 1, k));
      if (k > 0) d.gd_vals(t, k) = PrincipalValue(angle(t, k) - angle(t, k - 1));
    }
  }
  return d;
}

DerivativeField DerivativeFields(const ComplexSpectrogram& s) {
  return DerivativeFields(s.values);
}

}  // namespace phasecont
