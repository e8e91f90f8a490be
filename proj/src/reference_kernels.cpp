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

// Serial reference kernels. Plain loops, no OpenMP, written to mirror the
// defining formulas as directly as possible.

#include <algorithm>
#include <cmath>
#include <string>

#include "sfid/change.hpp"
#include "sfid/fusion.hpp"
#include "sfid/metrics.hpp"

namespace sfid::reference {

ProbMap aggregate_instances(std::span<const InstanceQuery> queries, std::size_t height,
                            std::size_t width) {
  ProbMap out(height, width, 0.0f);
  for (const auto& q : queries) {
    if (!q.map.same_shape(out)) throw ShapeError("instance query dimension mismatch");
  }
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      float peak = 0.0f;
      for (const auto& q : queries) peak = std::max(peak, q.map(r, c) * q.confidence);
      out(r, c) = peak;
    }
  }
  return out;
}

ProbMap fuse_semantic_instance(const ProbMap& semantic, const ProbMap& aggregated) {
  require_same_shape(semantic, aggregated, "fuse_semantic_instance");
  ProbMap out(semantic.height(), semantic.width());
  for (std::size_t r = 0; r < out.height(); ++r) {
    for (std::size_t c = 0; c < out.width(); ++c) {
      out(r, c) = std::max(semantic(r, c), aggregated(r, c));
    }
  }
  return out;
}

LabelMap gate_and_label(std::span<const ProbMap> fused, std::span<const float> presence,
                        float background_threshold) {
  if (fused.empty() || fused.size() != presence.size()) {
    throw ShapeError("stack depth vs presence length mismatch");
  }
  LabelMap out(fused.front().height(), fused.front().width(), kBackground);
  for (std::size_t r = 0; r < out.height(); ++r) {
    for (std::size_t col = 0; col < out.width(); ++col) {
      std::int32_t label = kBackground;
      double best = -1.0;
      for (std::size_t c = 0; c < fused.size(); ++c) {
        const double g = static_cast<double>(fused[c](r, col)) * static_cast<double>(presence[c]);
        if (g > best) {
          best = g;
          label = static_cast<std::int32_t>(c);
        }
      }
      out(r, col) = best < static_cast<double>(background_threshold) ? kBackground : label;
    }
  }
  return out;
}

std::vector<double> pixel_distance(std::span<const ProbMap> s1, std::span<const ProbMap> s2,
                                   Norm norm) {
  if (s1.size() != s2.size() || s1.empty()) throw ShapeError("stack depth mismatch");
  const std::size_t n = s1.front().size();
  std::vector<double> d(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < s1.size(); ++c) {
      const double diff = static_cast<double>(s1[c].values()[i]) - s2[c].values()[i];
      acc += norm == Norm::kL1 ? std::abs(diff) : diff * diff;
    }
    d[i] = norm == Norm::kL1 ? acc : std::sqrt(acc);
  }
  return d;
}

BinaryMask detect_changes_logit(std::span<const ProbMap> s1, std::span<const ProbMap> s2,
                                Norm norm, double threshold) {
  auto d = reference::pixel_distance(s1, s2, norm);
  double peak = 0.0;
  for (double v : d) peak = std::max(peak, v);
  BinaryMask out(s1.front().height(), s1.front().width());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double normalized = peak > 0.0 ? d[i] / peak : 0.0;
    out.values()[i] = normalized >= threshold ? 1 : 0;
  }
  return out;
}

ConfusionCounts confusion_counts(const BinaryMask& pred, const BinaryMask& gt) {
  require_same_shape(pred, gt, "confusion_counts");
  ConfusionCounts c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool p = pred.values()[i] != 0;
    const bool g = gt.values()[i] != 0;
    if (p && g) ++c.tp;
    else if (p) ++c.fp;
    else if (g) ++c.fn;
    else ++c.tn;
  }
  return c;
}

}  // namespace sfid::reference
