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
#include <cstdint>

#include "sfid/change.hpp"
#include "sfid/instances.hpp"
#include "sfid/manifest.hpp"

namespace sfid {

struct NoiseConfig {
  double semantic_jitter = 0.0;    // uniform +/- amplitude on semantic maps
  double confidence_jitter = 0.0;  // confidence = 1 - U(0, amplitude)
  double presence_flip = 0.0;      // per-category flip probability of the presence score
  double illumination = 0.0;       // peak of an additive linear ramp on T2 semantic maps
  double speckle = 0.0;            // per object pixel chance of a weak misclassification
};

struct SynthConfig {
  std::uint64_t seed = 0;
  std::size_t height = 64;
  std::size_t width = 64;
  std::size_t categories = 2;
  std::size_t objects_min = 2;
  std::size_t objects_max = 6;
  double change_fraction = 0.3;
  NoiseConfig noise;

  void validate() const;
};

// Value levels of generated head outputs.
inline constexpr float kSynthObjectProb = 0.9f;
inline constexpr float kSynthBackgroundProb = 0.05f;
inline constexpr float kSynthQueryProb = 0.95f;

// Name of category `c` in generated vocabularies.
std::string synth_category_name(std::size_t c);

// Plants rectangles and connected blobs on disjoint footprints (one pixel of
// clearance), then makes a change_fraction subset appear, disappear or
// relocate between epochs. The returned pair carries per-category ground
// truth marking exactly the pixels of the changed objects.
ScenePair generate_scene_pair(const SynthConfig& cfg);

// Brute-force references. They share no code with the production
// labeling and matching paths.
InstanceSet oracle_connected_components(const BinaryMask& mask);
BinaryMask oracle_change_mask(const BinaryMask& m1, const BinaryMask& m2, double tau);

}  // namespace sfid
