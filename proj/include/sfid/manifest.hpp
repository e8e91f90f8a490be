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

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sfid/fusion.hpp"
#include "sfid/grid.hpp"

namespace sfid {

// Head outputs for one epoch.
struct EpochOutputs {
  ProbStack semantic;                                 // one map per category
  std::vector<std::vector<InstanceQuery>> queries;    // grouped by category
  std::vector<float> presence;                        // one score per category
  std::optional<std::string> image;                   // source image, metadata only
};

struct ScenePair {
  std::string pair_id;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<std::string> vocabulary;
  EpochOutputs t1;
  EpochOutputs t2;
  std::optional<std::vector<BinaryMask>> ground_truth;  // per category

  std::size_t category_count() const noexcept { return vocabulary.size(); }
};

// Checks every ScenePair invariant, throwing ManifestError on the first violation.
void validate_scene_pair(const ScenePair& pair);

// Parses a JSON manifest and loads every referenced tensor. Relative paths
// resolve against the manifest's directory.
ScenePair load_scene_pair(const std::filesystem::path& manifest_path);

// Writes the tensors and a manifest named manifest.json into `dir`.
// Returns the manifest path.
std::filesystem::path save_scene_pair(const ScenePair& pair, const std::filesystem::path& dir);

// Category names become file-name components, so path separators, dots and
// empty names are rejected.
bool is_valid_category_name(const std::string& name);

}  // namespace sfid
