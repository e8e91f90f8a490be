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

#include "sfid/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <map>
#include <set>
#include <thread>

#include "sfid/fusion.hpp"
#include "sfid/tensor.hpp"

namespace sfid {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::kInstance: return "instance";
    case Strategy::kPmc: return "pmc";
    case Strategy::kL1: return "l1";
    case Strategy::kL2: return "l2";
  }
  return "unknown";
}

Strategy parse_strategy(const std::string& name) {
  for (auto s : {Strategy::kInstance, Strategy::kPmc, Strategy::kL1, Strategy::kL2}) {
    if (name == to_string(s)) return s;
  }
  throw ConfigError("unknown strategy '" + name + "' (instance, pmc, l1, l2)");
}

void RunConfig::validate() const {
  MatchConfig{tau_match, min_area}.validate();
  if (!(background_threshold >= 0.0f && background_threshold <= 1.0f)) {
    throw ConfigError("background-threshold must lie in [0,1]");
  }
  if (!(baseline_threshold >= 0.0)) throw ConfigError("baseline-threshold must be >= 0");
  if (workers == 0) throw ConfigError("workers must be >= 1");
  if (output_dir.empty()) throw ConfigError("output directory is required");
  if (inputs.empty()) throw ConfigError("no inputs given");
  for (const auto& name : vocabulary) {
    if (!is_valid_category_name(name)) throw ConfigError("invalid vocabulary entry '" + name + "'");
  }
}

json RunConfig::to_json() const {
  json j;
  j["inputs"] = json::array();
  for (const auto& p : inputs) j["inputs"].push_back(p.string());
  j["vocabulary"] = vocabulary;
  j["tau-match"] = tau_match;
  j["background-threshold"] = background_threshold;
  j["min-area"] = min_area;
  j["strategy"] = to_string(strategy);
  j["baseline-threshold"] = baseline_threshold;
  j["workers"] = workers;
  j["output-dir"] = output_dir.string();
  return j;
}

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config root must be an object");
  RunConfig cfg;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "inputs") {
        for (const auto& p : value) cfg.inputs.emplace_back(p.get<std::string>());
      } else if (key == "vocabulary") {
        cfg.vocabulary = value.get<std::vector<std::string>>();
      } else if (key == "tau-match") {
        cfg.tau_match = value.get<double>();
      } else if (key == "background-threshold") {
        cfg.background_threshold = value.get<float>();
      } else if (key == "min-area") {
        cfg.min_area = value.get<std::size_t>();
      } else if (key == "strategy") {
        cfg.strategy = parse_strategy(value.get<std::string>());
      } else if (key == "baseline-threshold") {
        cfg.baseline_threshold = value.get<double>();
      } else if (key == "workers") {
        cfg.workers = value.get<std::size_t>();
      } else if (key == "output-dir") {
        cfg.output_dir = value.get<std::string>();
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

EpochLabels fuse_epoch(const EpochOutputs& epoch, std::size_t height, std::size_t width,
                       std::span<const std::size_t> categories, float background_threshold) {
  ProbStack fused;
  std::vector<float> presence;
  fused.reserve(categories.size());
  for (std::size_t c : categories) {
    const auto aggregated = aggregate_instances(epoch.queries.at(c), height, width);
    fused.push_back(fuse_semantic_instance(epoch.semantic.at(c), aggregated));
    presence.push_back(epoch.presence.at(c));
  }
  EpochLabels out;
  out.labels = gate_and_label(fused, presence, background_threshold);
  if (!fused.empty()) out.gated = gate_stack(fused, presence);
  return out;
}

namespace {

std::vector<std::size_t> active_categories(const ScenePair& pair, const RunConfig& cfg) {
  std::vector<std::size_t> active;
  if (cfg.vocabulary.empty()) {
    for (std::size_t c = 0; c < pair.category_count(); ++c) active.push_back(c);
    return active;
  }
  for (const auto& name : cfg.vocabulary) {
    auto it = std::ranges::find(pair.vocabulary, name);
    if (it == pair.vocabulary.end()) {
      throw ConfigError("category '" + name + "' not in vocabulary of pair " + pair.pair_id);
    }
    active.push_back(static_cast<std::size_t>(it - pair.vocabulary.begin()));
  }
  return active;
}

}  // namespace

PairMasks process_scene_pair(const ScenePair& pair, const RunConfig& cfg) {
  const auto active = active_categories(pair, cfg);
  const auto e1 = fuse_epoch(pair.t1, pair.height, pair.width, active, cfg.background_threshold);
  const auto e2 = fuse_epoch(pair.t2, pair.height, pair.width, active, cfg.background_threshold);
  const MatchConfig match{cfg.tau_match, cfg.min_area};

  PairMasks out;
  for (std::size_t k = 0; k < active.size(); ++k) {
    const auto label = static_cast<std::int32_t>(k);
    out.categories.push_back(pair.vocabulary[active[k]]);
    switch (cfg.strategy) {
      case Strategy::kInstance:
        out.masks.push_back(detect_changes_instance(binarize_category(e1.labels, label, active.size()),
                                                    binarize_category(e2.labels, label, active.size()),
                                                    match));
        break;
      case Strategy::kPmc:
        out.masks.push_back(detect_changes_pmc(e1.labels, e2.labels, label));
        break;
      case Strategy::kL1:
      case Strategy::kL2:
        out.masks.push_back(detect_changes_logit(std::span(&e1.gated[k], 1),
                                                 std::span(&e2.gated[k], 1),
                                                 cfg.strategy == Strategy::kL1 ? Norm::kL1 : Norm::kL2,
                                                 cfg.baseline_threshold));
        break;
    }
  }
  return out;
}

std::size_t RunResult::failed() const {
  return static_cast<std::size_t>(std::ranges::count_if(pairs, [](const auto& p) { return !p.ok; }));
}

std::vector<fs::path> collect_manifests(std::span<const fs::path> inputs) {
  std::vector<fs::path> out;
  auto is_manifest = [](const fs::path& p) {
    const auto name = p.filename().string();
    return name == "manifest.json" ||
           (name.size() > 14 && name.ends_with(".manifest.json"));
  };
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      for (const auto& entry : fs::recursive_directory_iterator(in)) {
        if (entry.is_regular_file() && is_manifest(entry.path())) out.push_back(entry.path());
      }
    } else if (fs::is_regular_file(in)) {
      out.push_back(in);
    } else {
      throw ConfigError("input not found: " + in.string());
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string mask_file_name(const std::string& pair_id, const std::string& category) {
  return pair_id + "." + category + ".sfid";
}

namespace {

// Cheap first pass: only the pair id, so duplicates are resolved before any
// worker writes a file.
std::string peek_pair_id(const fs::path& manifest) {
  std::ifstream in(manifest);
  if (!in) return {};
  const auto j = json::parse(in, nullptr, false);
  if (j.is_object() && j.contains("pair_id") && j["pair_id"].is_string()) {
    return j["pair_id"].get<std::string>();
  }
  return {};
}

void write_run_manifest(const RunConfig& cfg, const RunResult& result) {
  json j;
  j["config"] = cfg.to_json();
  j["pairs"] = json::array();
  for (const auto& p : result.pairs) {
    json entry{{"pair_id", p.pair_id},
               {"manifest", p.manifest.string()},
               {"status", p.ok ? "ok" : "failed"},
               {"outputs", p.outputs},
               {"timing_ms", p.seconds * 1e3}};
    if (!p.ok) entry["error"] = p.error;
    j["pairs"].push_back(std::move(entry));
  }
  j["summary"] = {{"pairs", result.pairs.size()},
                  {"succeeded", result.pairs.size() - result.failed()},
                  {"failed", result.failed()}};
  std::ofstream out(cfg.output_dir / kRunManifestName, std::ios::trunc);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("cannot write run manifest in " + cfg.output_dir.string());
}

}  // namespace

RunResult run_pipeline(const RunConfig& cfg) {
  cfg.validate();
  const auto manifests = collect_manifests(cfg.inputs);
  if (manifests.empty()) throw ConfigError("no scene-pair manifests found in inputs");
  fs::create_directories(cfg.output_dir);

  RunResult result;
  result.pairs.resize(manifests.size());
  std::set<std::string> claimed;
  std::vector<bool> runnable(manifests.size(), true);
  for (std::size_t i = 0; i < manifests.size(); ++i) {
    auto& outcome = result.pairs[i];
    outcome.manifest = manifests[i];
    outcome.pair_id = peek_pair_id(manifests[i]);
    if (!outcome.pair_id.empty() && !claimed.insert(outcome.pair_id).second) {
      outcome.error = "duplicate pair_id '" + outcome.pair_id + "'";
      runnable[i] = false;
    }
  }

  std::atomic<std::size_t> next{0};
  const std::size_t workers = std::min(cfg.workers, manifests.size());
  auto work = [&] {
    if (workers > 1) set_kernel_threads(1);
    for (std::size_t i = next++; i < manifests.size(); i = next++) {
      if (!runnable[i]) continue;
      auto& outcome = result.pairs[i];
      const auto start = std::chrono::steady_clock::now();
      try {
        const auto pair = load_scene_pair(manifests[i]);
        outcome.pair_id = pair.pair_id;
        const auto masks = process_scene_pair(pair, cfg);
        for (std::size_t k = 0; k < masks.masks.size(); ++k) {
          const auto name = mask_file_name(pair.pair_id, masks.categories[k]);
          write_tensor(cfg.output_dir / name, to_tensor(masks.masks[k]), TensorRole::kBinary);
          outcome.outputs.push_back(name);
        }
        outcome.ok = true;
      } catch (const std::exception& e) {
        outcome.ok = false;
        outcome.error = e.what();
      }
      outcome.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  write_run_manifest(cfg, result);
  return result;
}

namespace {

// "<pair>.<category>.sfid" -> {pair, category}; categories never contain dots.
std::pair<std::string, std::string> split_mask_name(const std::string& file) {
  const std::string stem = file.substr(0, file.size() - 5);
  const auto dot = stem.rfind('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == stem.size()) {
    throw FormatError("mask file name not of the form <pair_id>.<category>.sfid: " + file);
  }
  return {stem.substr(0, dot), stem.substr(dot + 1)};
}

std::set<std::string> mask_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::set<std::string> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.ends_with(".sfid")) out.insert(name);
  }
  return out;
}

}  // namespace

EvalReport run_eval(const fs::path& pred_dir, const fs::path& gt_dir) {
  const auto gt_files = mask_files(gt_dir);
  const auto pred_files = mask_files(pred_dir);
  if (gt_files.empty()) throw IoError("no ground truth masks in " + gt_dir.string());
  for (const auto& name : pred_files) {
    if (!gt_files.contains(name)) throw IoError("prediction without ground truth: " + name);
  }

  std::map<std::string, ConfusionCounts> counts;
  for (const auto& name : gt_files) {
    if (!pred_files.contains(name)) throw IoError("missing prediction for " + name);
    const auto [pair_id, category] = split_mask_name(name);
    const auto gt = to_binary_mask(read_tensor(gt_dir / name, TensorRole::kBinary));
    const auto pred = to_binary_mask(read_tensor(pred_dir / name, TensorRole::kBinary));
    counts[category] += confusion_counts(pred, gt);
  }
  return build_report(counts);
}

void write_eval_report(const EvalReport& report, const fs::path& dir) {
  fs::create_directories(dir);
  std::ofstream js(dir / "eval.json", std::ios::trunc);
  js << to_json(report).dump(2) << '\n';
  std::ofstream txt(dir / "eval.txt", std::ios::trunc);
  txt << to_table(report);
  if (!js || !txt) throw IoError("cannot write evaluation report in " + dir.string());
}

std::vector<fs::path> write_synthetic_corpus(const SynthConfig& cfg, std::size_t count,
                                             const fs::path& dir) {
  std::vector<fs::path> manifests;
  fs::create_directories(dir / "gt");
  for (std::size_t i = 0; i < count; ++i) {
    SynthConfig scene = cfg;
    scene.seed = cfg.seed + i;
    const auto pair = generate_scene_pair(scene);
    manifests.push_back(save_scene_pair(pair, dir / "pairs" / pair.pair_id));
    for (std::size_t c = 0; c < pair.category_count(); ++c) {
      write_tensor(dir / "gt" / mask_file_name(pair.pair_id, pair.vocabulary[c]),
                   to_tensor((*pair.ground_truth)[c]), TensorRole::kBinary);
    }
  }
  return manifests;
}

}  // namespace sfid
