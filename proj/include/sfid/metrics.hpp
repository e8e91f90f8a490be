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

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "sfid/grid.hpp"

namespace sfid {

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const noexcept { return tp + fp + fn + tn; }

  ConfusionCounts& operator+=(const ConfusionCounts& o) noexcept {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    return *this;
  }
  friend ConfusionCounts operator+(ConfusionCounts a, const ConfusionCounts& b) noexcept {
    return a += b;
  }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

ConfusionCounts confusion_counts(const BinaryMask& pred, const BinaryMask& gt);

// Degenerate denominators follow the "empty vs empty is perfect" convention:
// IoU, precision and recall are 1 when their denominator is 0, and F1 is 0
// when precision + recall is 0.
double iou(const ConfusionCounts& c);

struct PrfScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

PrfScores precision_recall_f1(const ConfusionCounts& c);

struct CategoryScores {
  std::string category;
  ConfusionCounts counts;
  double iou = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

CategoryScores score_category(std::string category, const ConfusionCounts& counts);

struct ClassAverage {
  double iou = 0.0;
  double f1 = 0.0;
};

// Unweighted mean over categories; throws ValueError on an empty list.
ClassAverage aggregate_class_average(std::span<const CategoryScores> categories);

struct EvalReport {
  std::vector<CategoryScores> categories;  // sorted by name
  ClassAverage class_average;
};

// Builds a report from dataset-level (micro-summed) counts per category.
EvalReport build_report(const std::map<std::string, ConfusionCounts>& counts);

nlohmann::json to_json(const EvalReport& report);
std::string to_table(const EvalReport& report);

namespace reference {
ConfusionCounts confusion_counts(const BinaryMask& pred, const BinaryMask& gt);
}  // namespace reference

}  // namespace sfid
