// Copyright 2026 The SFID Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sfid/errors.hpp"

namespace sfid {

// Dense row-major H x W grid.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  Grid(std::size_t height, std::size_t width, T fill = T{})
      : height_(height), width_(width), values_(height * width, fill) {}
  Grid(std::size_t height, std::size_t width, std::vector<T> values)
      : height_(height), width_(width), values_(std::move(values)) {
    if (values_.size() != height_ * width_) {
      throw ShapeError("grid " + std::to_string(height_) + "x" + std::to_string(width_) +
                       " given " + std::to_string(values_.size()) + " values");
    }
  }

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  T& operator()(std::size_t row, std::size_t col) { return values_[row * width_ + col]; }
  const T& operator()(std::size_t row, std::size_t col) const {
    return values_[row * width_ + col];
  }

  std::span<T> values() noexcept { return values_; }
  std::span<const T> values() const noexcept { return values_; }
  std::span<T> row(std::size_t r) { return std::span<T>(values_).subspan(r * width_, width_); }
  std::span<const T> row(std::size_t r) const {
    return std::span<const T>(values_).subspan(r * width_, width_);
  }

  template <typename U>
  bool same_shape(const Grid<U>& other) const noexcept {
    return height_ == other.height() && width_ == other.width();
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<T> values_;
};

using ProbMap = Grid<float>;
using BinaryMask = Grid<std::uint8_t>;
using LabelMap = Grid<std::int32_t>;

// One ProbMap per vocabulary category, all sharing dimensions.
using ProbStack = std::vector<ProbMap>;

inline constexpr std::int32_t kBackground = -1;

template <typename A, typename B>
void require_same_shape(const Grid<A>& a, const Grid<B>& b, const char* what) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(what) + ": " + std::to_string(a.height()) + "x" +
                     std::to_string(a.width()) + " vs " + std::to_string(b.height()) + "x" +
                     std::to_string(b.width()));
  }
}

}  // namespace sfid
