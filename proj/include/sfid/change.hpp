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
#include <span>
#include <vector>

#include "sfid/grid.hpp"
#include "sfid/instances.hpp"

namespace sfid {

struct MatchConfig {
  double tau_match = 0.5;
  std::size_t min_area = 0;

  // Throws ConfigError unless 0 < tau_match <= 1.
  void validate() const;
};

// Instances left without a counterpart at each epoch.
struct ChangeCandidateSets {
  std::vector<Instance> c_t1;
  std::vector<Instance> c_t2;
};

// Fraction of `a` covered by `b`: |a ∩ b| / |a|. Asymmetric.
double overlap_ratio(const Instance& a, const Instance& b);

// Forward check keeps a T1 instance as unchanged when a single T2 instance
// covers at least tau_match of it; the backward check mirrors this for T2
// instances. Coverage by several counterparts is never summed.
ChangeCandidateSets match_instances(const InstanceSet& t1, const InstanceSet& t2,
                                    const MatchConfig& cfg);

BinaryMask assemble_change_mask(const ChangeCandidateSets& candidates, std::size_t height,
                                std::size_t width);

// Decouple -> filter -> match -> assemble, for one category.
BinaryMask detect_changes_instance(const BinaryMask& m1, const BinaryMask& m2,
                                   const MatchConfig& cfg);

// Pixel-wise mask comparison baseline: set where exactly one epoch has `category`.
BinaryMask detect_changes_pmc(const LabelMap& l1, const LabelMap& l2, std::int32_t category);

enum class Norm { kL1, kL2 };

// Distance baseline over stacked maps. The per-pixel distance is divided by
// its image maximum (zero image stays zero) and thresholded with >=.
BinaryMask detect_changes_logit(std::span<const ProbMap> s1, std::span<const ProbMap> s2,
                                Norm norm, double threshold);

// Un-normalized per-pixel distance, row-major.
std::vector<double> pixel_distance(std::span<const ProbMap> s1, std::span<const ProbMap> s2,
                                   Norm norm);

namespace reference {

std::vector<double> pixel_distance(std::span<const ProbMap> s1, std::span<const ProbMap> s2,
                                   Norm norm);
BinaryMask detect_changes_logit(std::span<const ProbMap> s1, std::span<const ProbMap> s2,
                                Norm norm, double threshold);

}  // namespace reference

}  // namespace sfid
