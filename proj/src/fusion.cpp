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

#include "sfid/fusion.hpp"

#include <algorithm>
#include <cstdint>
#include <string>

#include <omp.h>

namespace sfid {

namespace {

void check_stack(std::span<const ProbMap> fused, std::span<const float> presence) {
  if (fused.empty()) throw ShapeError("gating needs at least one category");
  if (fused.size() != presence.size()) {
    throw ShapeError("stack depth " + std::to_string(fused.size()) + " vs presence length " +
                     std::to_string(presence.size()));
  }
  for (const auto& m : fused) require_same_shape(m, fused.front(), "fused stack");
}

}  // namespace

void set_kernel_threads(int threads) { omp_set_num_threads(std::max(1, threads)); }
int kernel_threads() { return omp_get_max_threads(); }

ProbMap aggregate_instances(std::span<const InstanceQuery> queries, std::size_t height,
                            std::size_t width) {
  for (const auto& q : queries) {
    if (q.map.height() != height || q.map.width() != width) {
      throw ShapeError("instance query " + std::to_string(q.map.height()) + "x" +
                       std::to_string(q.map.width()) + " vs expected " + std::to_string(height) +
                       "x" + std::to_string(width));
    }
  }
  ProbMap out(height, width, 0.0f);
  auto dst = out.values();
  const auto n = static_cast<std::int64_t>(height);
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < n; ++r) {
    const std::size_t begin = static_cast<std::size_t>(r) * width;
    for (const auto& q : queries) {
      const float s = q.confidence;
      auto src = q.map.values();
      for (std::size_t i = begin; i < begin + width; ++i) dst[i] = std::max(dst[i], src[i] * s);
    }
  }
  return out;
}

ProbMap fuse_semantic_instance(const ProbMap& semantic, const ProbMap& aggregated) {
  require_same_shape(semantic, aggregated, "fuse_semantic_instance");
  ProbMap out(semantic.height(), semantic.width());
  auto a = semantic.values();
  auto b = aggregated.values();
  auto dst = out.values();
  const auto n = static_cast<std::int64_t>(dst.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) dst[i] = std::max(a[i], b[i]);
  return out;
}

LabelMap gate_and_label(std::span<const ProbMap> fused, std::span<const float> presence,
                        float background_threshold) {
  check_stack(fused, presence);
  const std::size_t categories = fused.size();
  LabelMap out(fused.front().height(), fused.front().width(), kBackground);
  auto dst = out.values();
  const double threshold = background_threshold;
  const auto n = static_cast<std::int64_t>(dst.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    // float*float is exact in double, so ties and orderings are exact.
    double best = static_cast<double>(fused[0].values()[i]) * presence[0];
    std::int32_t label = 0;
    for (std::size_t c = 1; c < categories; ++c) {
      const double g = static_cast<double>(fused[c].values()[i]) * presence[c];
      if (g > best) {
        best = g;
        label = static_cast<std::int32_t>(c);
      }
    }
    dst[i] = best < threshold ? kBackground : label;
  }
  return out;
}

ProbStack gate_stack(std::span<const ProbMap> fused, std::span<const float> presence) {
  check_stack(fused, presence);
  ProbStack out;
  out.reserve(fused.size());
  for (std::size_t c = 0; c < fused.size(); ++c) {
    ProbMap g(fused[c].height(), fused[c].width());
    auto src = fused[c].values();
    auto dst = g.values();
    const float s = presence[c];
    const auto n = static_cast<std::int64_t>(dst.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) dst[i] = src[i] * s;
    out.push_back(std::move(g));
  }
  return out;
}

BinaryMask binarize_category(const LabelMap& labels, std::int32_t category,
                             std::size_t category_count) {
  if (category < 0 || static_cast<std::size_t>(category) >= category_count) {
    throw ValueError("category " + std::to_string(category) + " outside vocabulary of " +
                     std::to_string(category_count));
  }
  BinaryMask out(labels.height(), labels.width());
  std::ranges::transform(labels.values(), out.values().begin(),
                         [category](std::int32_t l) { return std::uint8_t(l == category); });
  return out;
}

BinaryMask background_mask(const LabelMap& labels) {
  BinaryMask out(labels.height(), labels.width());
  std::ranges::transform(labels.values(), out.values().begin(),
                         [](std::int32_t l) { return std::uint8_t(l == kBackground); });
  return out;
}

}  // namespace sfid
