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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "sfid/change.hpp"
#include "sfid/manifest.hpp"
#include "sfid/metrics.hpp"
#include "sfid/synth.hpp"

namespace sfid {

enum class Strategy { kInstance, kPmc, kL1, kL2 };

const char* to_string(Strategy s);
Strategy parse_strategy(const std::string& name);  // throws ConfigError

struct RunConfig {
  std::vector<std::filesystem::path> inputs;  // manifests or directories
  std::vector<std::string> vocabulary;        // empty: each manifest's own vocabulary
  double tau_match = 0.5;
  float background_threshold = 0.5f;
  std::size_t min_area = 0;
  Strategy strategy = Strategy::kInstance;
  double baseline_threshold = 0.5;
  std::size_t workers = 1;
  std::filesystem::path output_dir;

  void validate() const;

  // Keys are the kebab-case CLI option names.
  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
};

// Presence-gated labels of one epoch, plus the gated maps the distance
// baselines compare. Labels index into the active category list.
struct EpochLabels {
  LabelMap labels;
  ProbStack gated;
};

EpochLabels fuse_epoch(const EpochOutputs& epoch, std::size_t height, std::size_t width,
                       std::span<const std::size_t> categories, float background_threshold);

struct PairMasks {
  std::vector<std::string> categories;
  std::vector<BinaryMask> masks;
};

// Runs fusion, labeling and the configured change strategy on one loaded pair.
PairMasks process_scene_pair(const ScenePair& pair, const RunConfig& cfg);

struct PairOutcome {
  std::string pair_id;
  std::filesystem::path manifest;
  bool ok = false;
  std::string error;
  std::vector<std::string> outputs;  // file names inside output_dir
  double seconds = 0.0;
};

struct RunResult {
  std::vector<PairOutcome> pairs;  // in manifest path order

  std::size_t failed() const;
  int exit_code() const { return failed() == 0 ? 0 : 1; }
};

inline constexpr const char* kRunManifestName = "run.json";

// Directory inputs are searched recursively for manifest.json / *.manifest.json.
std::vector<std::filesystem::path> collect_manifests(
    std::span<const std::filesystem::path> inputs);

std::string mask_file_name(const std::string& pair_id, const std::string& category);

// Processes every pair with a pool of cfg.workers threads; a failing pair is
// recorded and skipped. Writes <pair_id>.<category>.sfid masks and run.json
// into cfg.output_dir.
RunResult run_pipeline(const RunConfig& cfg);

// Dataset-level evaluation of <pair_id>.<category>.sfid masks. Every ground
// truth file needs a prediction and vice versa.
EvalReport run_eval(const std::filesystem::path& pred_dir, const std::filesystem::path& gt_dir);

void write_eval_report(const EvalReport& report, const std::filesystem::path& dir);

// Writes `count` generated pairs (seeds cfg.seed, cfg.seed+1, ...) as
// <dir>/pairs/<pair_id>/manifest.json with ground truth masks in <dir>/gt.
std::vector<std::filesystem::path> write_synthetic_corpus(const SynthConfig& cfg, std::size_t count,
                                                          const std::filesystem::path& dir);

}  // namespace sfid
