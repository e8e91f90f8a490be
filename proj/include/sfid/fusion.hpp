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

namespace sfid {

// One decoder proposal: a spatial probability map and its confidence.
struct InstanceQuery {
  ProbMap map;
  float confidence = 0.0f;
};

// Per-pixel peak of confidence-weighted query maps. An empty query set
// yields the all-zero map of the requested size.
ProbMap aggregate_instances(std::span<const InstanceQuery> queries, std::size_t height,
                            std::size_t width);

// Per-pixel max of the semantic and aggregated instance maps.
ProbMap fuse_semantic_instance(const ProbMap& semantic, const ProbMap& aggregated);

// Presence-gated argmax labeling.
//
// Each category's fused map is scaled by its presence score; a pixel takes
// the category with the largest gated value, the lowest index on ties, and
// kBackground when that value is below background_threshold.
LabelMap gate_and_label(std::span<const ProbMap> fused, std::span<const float> presence,
                        float background_threshold);

// Gated maps P_fused * S_pres, one per category.
ProbStack gate_stack(std::span<const ProbMap> fused, std::span<const float> presence);

BinaryMask binarize_category(const LabelMap& labels, std::int32_t category,
                             std::size_t category_count);

// Background pixels of a label map.
BinaryMask background_mask(const LabelMap& labels);

// Thread count used by the OpenMP kernels of the calling thread.
void set_kernel_threads(int threads);
int kernel_threads();

namespace reference {

// Single-threaded transcriptions of the kernels above, kept for testing and
// benchmarking. They must stay free of OpenMP.
ProbMap aggregate_instances(std::span<const InstanceQuery> queries, std::size_t height,
                            std::size_t width);
ProbMap fuse_semantic_instance(const ProbMap& semantic, const ProbMap& aggregated);
LabelMap gate_and_label(std::span<const ProbMap> fused, std::span<const float> presence,
                        float background_threshold);

}  // namespace reference

}  // namespace sfid
