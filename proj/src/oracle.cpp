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

// Reference implementations: breadth-first flood fill and a literal
// all-pairs transcription of the overlap-ratio matching rule.

#include <algorithm>
#include <deque>
#include <iterator>
#include <set>

#include "sfid/synth.hpp"

namespace sfid {

InstanceSet oracle_connected_components(const BinaryMask& mask) {
  const auto h = static_cast<long>(mask.height());
  const auto w = static_cast<long>(mask.width());
  Grid<std::uint8_t> visited(mask.height(), mask.width(), 0);
  InstanceSet set{mask.height(), mask.width(), {}};

  for (long r = 0; r < h; ++r) {
    for (long c = 0; c < w; ++c) {
      if (mask(r, c) == 0 || visited(r, c)) continue;
      Instance inst;
      inst.label_id = static_cast<std::uint32_t>(set.instances.size() + 1);
      std::deque<std::pair<long, long>> queue{{r, c}};
      visited(r, c) = 1;
      while (!queue.empty()) {
        auto [y, x] = queue.front();
        queue.pop_front();
        inst.pixels.push_back({static_cast<std::uint32_t>(y), static_cast<std::uint32_t>(x)});
        for (long dy = -1; dy <= 1; ++dy) {
          for (long dx = -1; dx <= 1; ++dx) {
            const long ny = y + dy, nx = x + dx;
            if (ny < 0 || nx < 0 || ny >= h || nx >= w) continue;
            if (mask(ny, nx) == 0 || visited(ny, nx)) continue;
            visited(ny, nx) = 1;
            queue.emplace_back(ny, nx);
          }
        }
      }
      std::sort(inst.pixels.begin(), inst.pixels.end());
      set.instances.push_back(std::move(inst));
    }
  }
  return set;
}

namespace {

using PixelSet = std::set<std::pair<std::size_t, std::size_t>>;

std::vector<PixelSet> pixel_sets(const BinaryMask& mask) {
  std::vector<PixelSet> out;
  for (const auto& inst : oracle_connected_components(mask).instances) {
    PixelSet s;
    for (const auto& p : inst.pixels) s.insert({p.row, p.col});
    out.push_back(std::move(s));
  }
  return out;
}

double ratio(const PixelSet& a, const PixelSet& b) {
  PixelSet both;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(both, both.end()));
  return static_cast<double>(both.size()) / static_cast<double>(a.size());
}

}  // namespace

BinaryMask oracle_change_mask(const BinaryMask& m1, const BinaryMask& m2, double tau) {
  require_same_shape(m1, m2, "oracle_change_mask");
  const auto i1 = pixel_sets(m1);
  const auto i2 = pixel_sets(m2);
  BinaryMask out(m1.height(), m1.width(), 0);

  auto check = [&](const std::vector<PixelSet>& from, const std::vector<PixelSet>& against) {
    for (const auto& a : from) {
      bool matched = false;
      for (const auto& b : against) {
        if (ratio(a, b) >= tau) matched = true;
      }
      if (!matched) {
        for (const auto& [r, c] : a) out(r, c) = 1;
      }
    }
  };
  check(i1, i2);
  check(i2, i1);
  return out;
}

}  // namespace sfid
