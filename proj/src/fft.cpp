// Copyright 2026 The phasecont Authors
// SPDX-License-Identifier: Apache-2.0

#include "phasecont/fft.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "phasecont/error.hpp"

namespace phasecont {

bool IsPowerOfTwo(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

FftPlan::FftPlan(std::size_t size) : size_(size) {
  if (!IsPowerOfTwo(size))
    throw Error(ErrorKind::kInput, "FFT size must be a power of two");
  bit_reverse_.resize(size);
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < size) ++bits;
  for (std::size_t i = 0; i < size; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b) r |= ((i >> b) & 1U) << (bits - 1 - b);
    bit_reverse_[i] = r;
  }
  twiddles_.resize(size / 2);
  for (std::size_t j = 0; j < size / 2; ++j) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(j) /
                         static_cast<double>(size);
    twiddles_[j] = {std::cos(angle), std::sin(angle)};
  }
}

void FftPlan::Forward(std::span<std::complex<double>> data) const {
  if (data.size() != size_) throw Error(ErrorKind::kInput, "FFT buffer size mismatch");
  for (std::size_t i = 0; i < size_; ++i) {
    if (i < bit_reverse_[i]) std::swap(data[i], data[bit_reverse_[i]]);
  }
  for (std::size_t len = 2; len <= size_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = size_ / len;
    for (std::size_t start = 0; start < size_; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const std::complex<double> w = twiddles_[j * stride];
        const std::complex<double> a = data[start + j];
        const std::complex<double> b = data[start + j + half];
        // Explicit product keeps a zero imaginary part exactly zero.
        const std::complex<double> wb(w.real() * b.real() - w.imag() * b.imag(),
                                      w.real() * b.imag() + w.imag() * b.real());
        data[start + j] = a + wb;
        data[start + j + half] = a - wb;
      }
    }
  }
}

}  // namespace phasecont
