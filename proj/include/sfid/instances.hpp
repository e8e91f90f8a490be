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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "sfid/grid.hpp"

namespace sfid {

struct Pixel {
  std::uint32_t row = 0;
  std::uint32_t col = 0;

  friend auto operator<=>(const Pixel&, const Pixel&) = default;
};

// One 8-connected region of a category mask. Pixels are kept in row-major order.
struct Instance {
  std::vector<Pixel> pixels;
  std::size_t category = 0;
  std::uint32_t label_id = 0;

  std::size_t area() const noexcept { return pixels.size(); }

  friend bool operator==(const Instance&, const Instance&) = default;
};

struct InstanceSet {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<Instance> instances;

  friend bool operator==(const InstanceSet&, const InstanceSet&) = default;
};

// Component label grid: 0 is background, components are numbered 1..count
// in the row-major order of their first pixel.
struct ComponentLabels {
  Grid<std::uint32_t> labels;
  std::uint32_t count = 0;
};

// 8-connectivity labeling (two-pass union-find).
ComponentLabels label_components(const BinaryMask& mask);

InstanceSet connected_components(const BinaryMask& mask, std::size_t category);

// Keeps instances with area >= min_area; label ids are preserved.
InstanceSet filter_instances(const InstanceSet& set, std::size_t min_area);

}  // namespace sfid
