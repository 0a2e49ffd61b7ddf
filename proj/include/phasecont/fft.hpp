// Copyright 2026 The phasecont Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace phasecont {

// Iterative radix-2 decimation-in-time FFT for power-of-two sizes.
// Computes X[k] = sum_m x[m] exp(-2 pi i k m / N) in place. A plan is
// immutable after construction and may be shared across threads.
class FftPlan {
 public:
  explicit FftPlan(std::size_t size);

  std::size_t size() const noexcept { return size_; }
  void Forward(std::span<std::complex<double>> data) const;

 private:
  std::size_t size_;
  std::vector<std::size_t> bit_reverse_;
  std::vector<std::complex<double>> twiddles_;  // exp(-2 pi i j / N), j < N/2
};

bool IsPowerOfTwo(std::size_t n) noexcept;

}  // namespace phasecont
