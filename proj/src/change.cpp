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

#include "sfid/change.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include <omp.h>

namespace sfid {

void MatchConfig::validate() const {
  if (!(tau_match > 0.0 && tau_match <= 1.0)) {
    throw ConfigError("tau_match must lie in (0,1], got " + std::to_string(tau_match));
  }
}

double overlap_ratio(const Instance& a, const Instance& b) {
  // Both pixel lists are row-major sorted.
  std::size_t shared = 0;
  auto ia = a.pixels.begin();
  auto ib = b.pixels.begin();
  while (ia != a.pixels.end() && ib != b.pixels.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++shared;
      ++ia;
      ++ib;
    }
  }
  return static_cast<double>(shared) / static_cast<double>(a.area());
}

namespace {

void check_fits(const Instance& inst, std::size_t height, std::size_t width) {
  for (const auto& p : inst.pixels) {
    if (p.row >= height || p.col >= width) {
      throw ShapeError("instance pixel (" + std::to_string(p.row) + "," + std::to_string(p.col) +
                       ") outside " + std::to_string(height) + "x" + std::to_string(width) +
                       " grid");
    }
  }
}

// Index (1-based) of the owning instance per pixel.
Grid<std::uint32_t> ownership(const InstanceSet& set) {
  Grid<std::uint32_t> owner(set.height, set.width, 0);
  for (std::size_t i = 0; i < set.instances.size(); ++i) {
    check_fits(set.instances[i], set.height, set.width);
    for (const auto& p : set.instances[i].pixels) {
      owner(p.row, p.col) = static_cast<std::uint32_t>(i + 1);
    }
  }
  return owner;
}

// Instances of `from` lacking a single counterpart in `against` that covers >= tau of them.
std::vector<Instance> unmatched(const InstanceSet& from, const Grid<std::uint32_t>& against,
                                double tau) {
  std::vector<Instance> out;
  std::unordered_map<std::uint32_t, std::size_t> shared;
  for (const auto& inst : from.instances) {
    shared.clear();
    for (const auto& p : inst.pixels) {
      if (const auto o = against(p.row, p.col); o != 0) ++shared[o];
    }
    std::size_t best = 0;
    for (const auto& [owner, count] : shared) best = std::max(best, count);
    const double ratio = static_cast<double>(best) / static_cast<double>(inst.area());
    if (!(ratio >= tau)) out.push_back(inst);
  }
  return out;
}

}  // namespace

ChangeCandidateSets match_instances(const InstanceSet& t1, const InstanceSet& t2,
                                    const MatchConfig& cfg) {
  cfg.validate();
  if (t1.height != t2.height || t1.width != t2.width) {
    throw ShapeError("match_instances: instance sets on different grids");
  }
  const auto owner1 = ownership(t1);
  const auto owner2 = ownership(t2);
  return {unmatched(t1, owner2, cfg.tau_match), unmatched(t2, owner1, cfg.tau_match)};
}

BinaryMask assemble_change_mask(const ChangeCandidateSets& candidates, std::size_t height,
                                std::size_t width) {
  BinaryMask out(height, width, 0);
  for (const auto* set : {&candidates.c_t1, &candidates.c_t2}) {
    for (const auto& inst : *set) {
      check_fits(inst, height, width);
      for (const auto& p : inst.pixels) out(p.row, p.col) = 1;
    }
  }
  return out;
}

BinaryMask detect_changes_instance(const BinaryMask& m1, const BinaryMask& m2,
                                   const MatchConfig& cfg) {
  require_same_shape(m1, m2, "detect_changes_instance");
  cfg.validate();
  const auto i1 = filter_instances(connected_components(m1, 0), cfg.min_area);
  const auto i2 = filter_instances(connected_components(m2, 0), cfg.min_area);
  return assemble_change_mask(match_instances(i1, i2, cfg), m1.height(), m1.width());
}

BinaryMask detect_changes_pmc(const LabelMap& l1, const LabelMap& l2, std::int32_t category) {
  require_same_shape(l1, l2, "detect_changes_pmc");
  BinaryMask out(l1.height(), l1.width());
  auto a = l1.values();
  auto b = l2.values();
  auto dst = out.values();
  const auto n = static_cast<std::int64_t>(dst.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) dst[i] = (a[i] == category) != (b[i] == category);
  return out;
}

std::vector<double> pixel_distance(std::span<const ProbMap> s1, std::span<const ProbMap> s2,
                                   Norm norm) {
  if (s1.empty() || s1.size() != s2.size()) {
    throw ShapeError("logit stacks of depth " + std::to_string(s1.size()) + " and " +
                     std::to_string(s2.size()));
  }
  for (std::size_t c = 0; c < s1.size(); ++c) {
    require_same_shape(s1[c], s1.front(), "logit stack");
    require_same_shape(s2[c], s1.front(), "logit stack");
  }
  const std::size_t depth = s1.size();
  std::vector<double> d(s1.front().size(), 0.0);
  const auto n = static_cast<std::int64_t>(d.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < depth; ++c) {
      const double diff = static_cast<double>(s1[c].values()[i]) - s2[c].values()[i];
      acc += norm == Norm::kL1 ? std::abs(diff) : diff * diff;
    }
    d[i] = norm == Norm::kL1 ? acc : std::sqrt(acc);
  }
  return d;
}

BinaryMask detect_changes_logit(std::span<const ProbMap> s1, std::span<const ProbMap> s2,
                                Norm norm, double threshold) {
  if (!(threshold >= 0.0)) {
    throw ConfigError("baseline threshold must be non-negative, got " + std::to_string(threshold));
  }
  const auto d = pixel_distance(s1, s2, norm);
  double peak = 0.0;
  const auto n = static_cast<std::int64_t>(d.size());
#pragma omp parallel for reduction(max : peak) schedule(static)
  for (std::int64_t i = 0; i < n; ++i) peak = std::max(peak, d[i]);

  BinaryMask out(s1.front().height(), s1.front().width());
  auto dst = out.values();
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const double normalized = peak > 0.0 ? d[i] / peak : 0.0;
    dst[i] = normalized >= threshold ? 1 : 0;
  }
  return out;
}

}  // namespace sfid
