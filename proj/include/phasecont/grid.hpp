// Copyright 2026 The phasecont Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace phasecont {

// Dense row-major frames x bins array. Row index is time (frame), column
// index is frequency (bin).
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t frames, std::size_t bins, T fill = T{})
      : frames_(frames), bins_(bins), data_(frames * bins, fill) {}

  std::size_t frames() const noexcept { return frames_; }
  std::size_t bins() const noexcept { return bins_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t t, std::size_t k) {
    assert(t < frames_ && k < bins_);
    return data_[t * bins_ + k];
  }
  const T& operator()(std::size_t t, std::size_t k) const {
    assert(t < frames_ && k < bins_);
    return data_[t * bins_ + k];
  }

  std::span<T> row(std::size_t t) { return {data_.data() + t * bins_, bins_}; }
  std::span<const T> row(std::size_t t) const {
    return {data_.data() + t * bins_, bins_};
  }

  std::span<T> flat() { return data_; }
  std::span<const T> flat() const { return data_; }

  bool same_shape(const Grid& other) const noexcept {
    return frames_ == other.frames_ && bins_ == other.bins_;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t frames_ = 0;
  std::size_t bins_ = 0;
  std::vector<T> data_;
};

}  // namespace phasecont
