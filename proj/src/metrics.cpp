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

#include "sfid/metrics.hpp"

#include <algorithm>
#include <cstdio>

#include <omp.h>

namespace sfid {

ConfusionCounts confusion_counts(const BinaryMask& pred, const BinaryMask& gt) {
  require_same_shape(pred, gt, "confusion_counts");
  auto p = pred.values();
  auto g = gt.values();
  std::uint64_t tp = 0, fp = 0, fn = 0;
  const auto n = static_cast<std::int64_t>(p.size());
#pragma omp parallel for reduction(+ : tp, fp, fn) schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const bool pi = p[i] != 0;
    const bool gi = g[i] != 0;
    tp += pi && gi;
    fp += pi && !gi;
    fn += !pi && gi;
  }
  return {tp, fp, fn, static_cast<std::uint64_t>(n) - tp - fp - fn};
}

double iou(const ConfusionCounts& c) {
  const std::uint64_t denom = c.tp + c.fp + c.fn;
  if (denom == 0) return 1.0;
  return static_cast<double>(c.tp) / static_cast<double>(denom);
}

PrfScores precision_recall_f1(const ConfusionCounts& c) {
  PrfScores s;
  s.precision = c.tp + c.fp == 0 ? 1.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  s.recall = c.tp + c.fn == 0 ? 1.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  const double sum = s.precision + s.recall;
  s.f1 = sum == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / sum;
  return s;
}

CategoryScores score_category(std::string category, const ConfusionCounts& counts) {
  const auto prf = precision_recall_f1(counts);
  return {std::move(category), counts, iou(counts), prf.precision, prf.recall, prf.f1};
}

ClassAverage aggregate_class_average(std::span<const CategoryScores> categories) {
  if (categories.empty()) throw ValueError("class average over an empty category list");
  ClassAverage avg;
  for (const auto& c : categories) {
    avg.iou += c.iou;
    avg.f1 += c.f1;
  }
  avg.iou /= static_cast<double>(categories.size());
  avg.f1 /= static_cast<double>(categories.size());
  return avg;
}

EvalReport build_report(const std::map<std::string, ConfusionCounts>& counts) {
  EvalReport report;
  for (const auto& [name, c] : counts) report.categories.push_back(score_category(name, c));
  report.class_average = aggregate_class_average(report.categories);
  return report;
}

nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json j;
  j["categories"] = nlohmann::json::array();
  for (const auto& c : report.categories) {
    j["categories"].push_back({
        {"category", c.category},
        {"iou", c.iou},
        {"precision", c.precision},
        {"recall", c.recall},
        {"f1", c.f1},
        {"counts", {{"tp", c.counts.tp}, {"fp", c.counts.fp}, {"fn", c.counts.fn}, {"tn", c.counts.tn}}},
    });
  }
  j["class_average"] = {{"iou", report.class_average.iou}, {"f1", report.class_average.f1}};
  return j;
}

std::string to_table(const EvalReport& report) {
  std::size_t name_width = 9;
  for (const auto& c : report.categories) name_width = std::max(name_width, c.category.size());

  std::string out;
  char line[256];
  auto row = [&](const std::string& name, double i, double p, double r, double f) {
    std::snprintf(line, sizeof line, "%-*s %7.2f %7.2f %7.2f %7.2f\n", static_cast<int>(name_width),
                  name.c_str(), 100 * i, 100 * p, 100 * r, 100 * f);
    out += line;
  };
  std::snprintf(line, sizeof line, "%-*s %7s %7s %7s %7s\n", static_cast<int>(name_width),
                "category", "IoU", "P", "R", "F1");
  out += line;
  for (const auto& c : report.categories) row(c.category, c.iou, c.precision, c.recall, c.f1);
  std::snprintf(line, sizeof line, "%-*s %7.2f %7s %7s %7.2f\n", static_cast<int>(name_width),
                "class avg", 100 * report.class_average.iou, "", "", 100 * report.class_average.f1);
  out += line;
  return out;
}

}  // namespace sfid
