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

#include "sfid/instances.hpp"

#include <algorithm>

namespace sfid {

namespace {

class DisjointSet {
 public:
  std::uint32_t make() {
    parent_.push_back(static_cast<std::uint32_t>(parent_.size()));
    return parent_.back();
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // Smaller provisional label becomes the root.
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::uint32_t> parent_;
};

}  // namespace

ComponentLabels label_components(const BinaryMask& mask) {
  const std::size_t h = mask.height(), w = mask.width();
  Grid<std::uint32_t> provisional(h, w, 0);
  DisjointSet sets;
  sets.make();  // slot 0 stays background

  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      if (mask(r, c) == 0) continue;
      // Already-visited 8-neighbours: W, NW, N, NE.
      std::uint32_t neighbours[4];
      int n = 0;
      if (c > 0 && provisional(r, c - 1)) neighbours[n++] = provisional(r, c - 1);
      if (r > 0) {
        if (c > 0 && provisional(r - 1, c - 1)) neighbours[n++] = provisional(r - 1, c - 1);
        if (provisional(r - 1, c)) neighbours[n++] = provisional(r - 1, c);
        if (c + 1 < w && provisional(r - 1, c + 1)) neighbours[n++] = provisional(r - 1, c + 1);
      }
      if (n == 0) {
        provisional(r, c) = sets.make();
        continue;
      }
      std::uint32_t label = neighbours[0];
      for (int i = 1; i < n; ++i) label = std::min(label, neighbours[i]);
      provisional(r, c) = label;
      for (int i = 0; i < n; ++i) sets.unite(label, neighbours[i]);
    }
  }

  // Second pass: final ids in order of each root's first appearance.
  ComponentLabels out{Grid<std::uint32_t>(h, w, 0), 0};
  std::vector<std::uint32_t> final_id;
  for (std::size_t i = 0; i < provisional.size(); ++i) {
    const std::uint32_t p = provisional.values()[i];
    if (p == 0) continue;
    const std::uint32_t root = sets.find(p);
    if (root >= final_id.size()) final_id.resize(root + 1, 0);
    if (final_id[root] == 0) final_id[root] = ++out.count;
    out.labels.values()[i] = final_id[root];
  }
  return out;
}

InstanceSet connected_components(const BinaryMask& mask, std::size_t category) {
  const auto components = label_components(mask);
  InstanceSet set{mask.height(), mask.width(), {}};
  set.instances.resize(components.count);
  for (std::uint32_t id = 0; id < components.count; ++id) {
    set.instances[id].category = category;
    set.instances[id].label_id = id + 1;
  }
  for (std::size_t r = 0; r < mask.height(); ++r) {
    for (std::size_t c = 0; c < mask.width(); ++c) {
      const std::uint32_t id = components.labels(r, c);
      if (id != 0) {
        set.instances[id - 1].pixels.push_back(
            {static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c)});
      }
    }
  }
  return set;
}

InstanceSet filter_instances(const InstanceSet& set, std::size_t min_area) {
  InstanceSet out{set.height, set.width, {}};
  for (const auto& inst : set.instances) {
    if (inst.area() >= min_area) out.instances.push_back(inst);
  }
  return out;
}

}  // namespace sfid
