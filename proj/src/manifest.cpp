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

#include "sfid/manifest.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

#include <json.hpp>

#include "sfid/errors.hpp"
#include "sfid/tensor.hpp"

namespace sfid {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(ManifestIssue issue) {
  switch (issue) {
    case ManifestIssue::kParse: return "parse";
    case ManifestIssue::kMissingField: return "missing-field";
    case ManifestIssue::kMissingFile: return "missing-file";
    case ManifestIssue::kBadVocabulary: return "bad-vocabulary";
    case ManifestIssue::kPresenceLength: return "presence-length";
    case ManifestIssue::kPresenceRange: return "presence-range";
    case ManifestIssue::kConfidenceRange: return "confidence-range";
    case ManifestIssue::kUnknownCategory: return "unknown-category";
    case ManifestIssue::kDeclaredShape: return "declared-shape";
    case ManifestIssue::kCrossTimeShape: return "cross-time-shape";
    case ManifestIssue::kBadTensor: return "bad-tensor";
  }
  return "unknown";
}

bool is_valid_category_name(const std::string& name) {
  return !name.empty() && name.find_first_of("/\\.") == std::string::npos &&
         std::ranges::none_of(name, [](char c) { return c == '\0'; });
}

namespace {

[[noreturn]] void fail(ManifestIssue issue, const std::string& what) {
  throw ManifestError(issue, what);
}

bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

std::string dims(const ProbMap& m) {
  return std::to_string(m.height()) + "x" + std::to_string(m.width());
}

void validate_vocabulary(const std::vector<std::string>& vocabulary) {
  if (vocabulary.empty()) fail(ManifestIssue::kBadVocabulary, "vocabulary is empty");
  std::set<std::string> seen;
  for (const auto& name : vocabulary) {
    if (!is_valid_category_name(name)) {
      fail(ManifestIssue::kBadVocabulary, "invalid category name '" + name + "'");
    }
    if (!seen.insert(name).second) {
      fail(ManifestIssue::kBadVocabulary, "duplicate category '" + name + "'");
    }
  }
}

void validate_epoch(const EpochOutputs& e, const std::string& tag, std::size_t categories,
                    std::size_t height, std::size_t width) {
  if (e.presence.size() != categories) {
    fail(ManifestIssue::kPresenceLength, tag + ": " + std::to_string(e.presence.size()) +
                                             " presence scores for " + std::to_string(categories) +
                                             " categories");
  }
  for (float p : e.presence) {
    if (!in_unit_interval(p)) {
      fail(ManifestIssue::kPresenceRange, tag + ": presence " + std::to_string(p));
    }
  }
  if (e.semantic.size() != categories) {
    fail(ManifestIssue::kDeclaredShape, tag + ": semantic stack depth " +
                                            std::to_string(e.semantic.size()) + " for " +
                                            std::to_string(categories) + " categories");
  }
  if (e.queries.size() != categories) {
    fail(ManifestIssue::kUnknownCategory, tag + ": query groups do not match vocabulary");
  }
  for (const auto& m : e.semantic) {
    if (m.height() != height || m.width() != width) {
      fail(ManifestIssue::kDeclaredShape, tag + ": semantic map " + dims(m) + " vs declared " +
                                              std::to_string(height) + "x" + std::to_string(width));
    }
  }
  for (const auto& group : e.queries) {
    for (const auto& q : group) {
      if (!in_unit_interval(q.confidence)) {
        fail(ManifestIssue::kConfidenceRange, tag + ": confidence " + std::to_string(q.confidence));
      }
      if (q.map.height() != height || q.map.width() != width) {
        fail(ManifestIssue::kDeclaredShape, tag + ": query map " + dims(q.map) + " vs declared " +
                                                std::to_string(height) + "x" +
                                                std::to_string(width));
      }
    }
  }
}

void check_cross_time(const EpochOutputs& a, const EpochOutputs& b) {
  if (!a.semantic.empty() && !b.semantic.empty() && !a.semantic.front().same_shape(b.semantic.front())) {
    fail(ManifestIssue::kCrossTimeShape,
         "t1 maps are " + dims(a.semantic.front()) + ", t2 maps are " + dims(b.semantic.front()));
  }
}

// ---- JSON helpers ----

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    fail(ManifestIssue::kMissingField, where + "." + key);
  }
  return obj.at(key);
}

std::string string_field(const json& obj, const char* key, const std::string& where) {
  const auto& v = field(obj, key, where);
  if (!v.is_string()) fail(ManifestIssue::kMissingField, where + "." + key + " must be a string");
  return v.get<std::string>();
}

std::size_t dim_field(const json& obj, const char* key) {
  const auto& v = field(obj, key, "manifest");
  if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0) {
    fail(ManifestIssue::kMissingField, std::string(key) + " must be a positive integer");
  }
  return v.get<std::size_t>();
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(ManifestIssue::kMissingField, where + " must be a number");
  return v.get<double>();
}

Tensor load(const fs::path& base, const std::string& rel, TensorRole role) {
  const fs::path path = base / rel;
  if (!fs::exists(path)) fail(ManifestIssue::kMissingFile, path.string());
  try {
    return read_tensor(path, role);
  } catch (const Error& e) {
    fail(ManifestIssue::kBadTensor, e.what());
  }
}

template <typename Convert>
auto convert(const Tensor& t, const std::string& rel, Convert fn) {
  try {
    return fn(t);
  } catch (const Error& e) {
    fail(ManifestIssue::kDeclaredShape, rel + ": " + e.what());
  }
}

std::size_t resolve_category(const json& q, const std::vector<std::string>& vocabulary,
                             const std::string& where) {
  if (!q.contains("category")) {
    if (vocabulary.size() == 1) return 0;
    fail(ManifestIssue::kUnknownCategory, where + " needs a category with " +
                                              std::to_string(vocabulary.size()) + " categories");
  }
  const auto& c = q.at("category");
  if (c.is_string()) {
    auto it = std::ranges::find(vocabulary, c.get<std::string>());
    if (it == vocabulary.end()) {
      fail(ManifestIssue::kUnknownCategory, where + ": '" + c.get<std::string>() + "'");
    }
    return static_cast<std::size_t>(it - vocabulary.begin());
  }
  if (c.is_number_unsigned() && c.get<std::size_t>() < vocabulary.size()) return c.get<std::size_t>();
  fail(ManifestIssue::kUnknownCategory, where + ": " + c.dump());
}

EpochOutputs parse_epoch(const json& j, const std::string& tag, const fs::path& base,
                         const std::vector<std::string>& vocabulary) {
  EpochOutputs e;
  if (!j.is_object()) fail(ManifestIssue::kMissingField, tag + " must be an object");

  const auto& presence = field(j, "presence", tag);
  if (!presence.is_array()) fail(ManifestIssue::kMissingField, tag + ".presence must be an array");
  for (const auto& p : presence) e.presence.push_back(static_cast<float>(number(p, tag + ".presence")));
  if (e.presence.size() != vocabulary.size()) {
    fail(ManifestIssue::kPresenceLength, tag + ": " + std::to_string(e.presence.size()) +
                                             " presence scores for " +
                                             std::to_string(vocabulary.size()) + " categories");
  }

  const auto sem_rel = string_field(j, "semantic", tag);
  e.semantic = convert(load(base, sem_rel, TensorRole::kProbability), sem_rel, to_prob_stack);

  e.queries.resize(vocabulary.size());
  const auto& queries = field(j, "instance_queries", tag);
  if (!queries.is_array()) fail(ManifestIssue::kMissingField, tag + ".instance_queries must be an array");
  for (std::size_t k = 0; k < queries.size(); ++k) {
    const std::string where = tag + ".instance_queries[" + std::to_string(k) + "]";
    const auto& q = queries[k];
    const double conf = number(field(q, "confidence", where), where + ".confidence");
    if (!in_unit_interval(conf)) {
      fail(ManifestIssue::kConfidenceRange, where + ": " + std::to_string(conf));
    }
    const auto category = resolve_category(q, vocabulary, where);
    const auto map_rel = string_field(q, "map", where);
    auto map = convert(load(base, map_rel, TensorRole::kProbability), map_rel, to_prob_map);
    e.queries[category].push_back({std::move(map), static_cast<float>(conf)});
  }

  if (j.contains("image") && j.at("image").is_string()) e.image = j.at("image").get<std::string>();
  return e;
}

json epoch_json(const EpochOutputs& e, const std::string& tag,
                const std::vector<std::string>& vocabulary, const fs::path& dir) {
  json j;
  const std::string sem = tag + "_semantic.sfid";
  write_tensor(dir / sem, to_tensor(std::span<const ProbMap>(e.semantic)), TensorRole::kProbability);
  j["semantic"] = sem;
  j["instance_queries"] = json::array();
  std::size_t k = 0;
  for (std::size_t c = 0; c < e.queries.size(); ++c) {
    for (const auto& q : e.queries[c]) {
      char name[64];
      std::snprintf(name, sizeof name, "%s_query_%03zu.sfid", tag.c_str(), k++);
      write_tensor(dir / name, to_tensor(q.map), TensorRole::kProbability);
      j["instance_queries"].push_back(
          {{"map", name}, {"confidence", q.confidence}, {"category", vocabulary[c]}});
    }
  }
  j["presence"] = e.presence;
  if (e.image) j["image"] = *e.image;
  return j;
}

}  // namespace

void validate_scene_pair(const ScenePair& pair) {
  validate_vocabulary(pair.vocabulary);
  if (pair.height == 0 || pair.width == 0) fail(ManifestIssue::kMissingField, "zero dimension");
  check_cross_time(pair.t1, pair.t2);
  validate_epoch(pair.t1, "t1", pair.category_count(), pair.height, pair.width);
  validate_epoch(pair.t2, "t2", pair.category_count(), pair.height, pair.width);
  if (pair.ground_truth) {
    if (pair.ground_truth->size() != pair.category_count()) {
      fail(ManifestIssue::kDeclaredShape, "ground truth depth " +
                                              std::to_string(pair.ground_truth->size()) + " for " +
                                              std::to_string(pair.category_count()) + " categories");
    }
    for (const auto& m : *pair.ground_truth) {
      if (m.height() != pair.height || m.width() != pair.width) {
        fail(ManifestIssue::kDeclaredShape, "ground truth mask dimensions");
      }
    }
  }
}

ScenePair load_scene_pair(const fs::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) fail(ManifestIssue::kMissingFile, manifest_path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    fail(ManifestIssue::kParse, manifest_path.string() + ": " + e.what());
  }
  if (!j.is_object()) fail(ManifestIssue::kParse, "manifest root must be an object");

  const fs::path base = manifest_path.parent_path();
  ScenePair pair;
  pair.pair_id = string_field(j, "pair_id", "manifest");
  if (pair.pair_id.empty() || pair.pair_id.find_first_of("/\\") != std::string::npos) {
    fail(ManifestIssue::kMissingField, "pair_id must be a non-empty file-name component");
  }
  pair.height = dim_field(j, "height");
  pair.width = dim_field(j, "width");

  const auto& vocab = field(j, "vocabulary", "manifest");
  if (!vocab.is_array()) fail(ManifestIssue::kBadVocabulary, "vocabulary must be an array");
  for (const auto& v : vocab) {
    if (!v.is_string()) fail(ManifestIssue::kBadVocabulary, "vocabulary entries must be strings");
    pair.vocabulary.push_back(v.get<std::string>());
  }
  validate_vocabulary(pair.vocabulary);

  pair.t1 = parse_epoch(field(j, "t1", "manifest"), "t1", base, pair.vocabulary);
  pair.t2 = parse_epoch(field(j, "t2", "manifest"), "t2", base, pair.vocabulary);

  if (j.contains("ground_truth") && !j.at("ground_truth").is_null()) {
    const auto rel = string_field(j, "ground_truth", "manifest");
    pair.ground_truth = convert(load(base, rel, TensorRole::kBinary), rel, to_mask_stack);
  }
  validate_scene_pair(pair);
  return pair;
}

fs::path save_scene_pair(const ScenePair& pair, const fs::path& dir) {
  validate_scene_pair(pair);
  fs::create_directories(dir);
  json j;
  j["pair_id"] = pair.pair_id;
  j["height"] = pair.height;
  j["width"] = pair.width;
  j["vocabulary"] = pair.vocabulary;
  j["t1"] = epoch_json(pair.t1, "t1", pair.vocabulary, dir);
  j["t2"] = epoch_json(pair.t2, "t2", pair.vocabulary, dir);
  if (pair.ground_truth) {
    write_tensor(dir / "ground_truth.sfid",
                 to_tensor(std::span<const BinaryMask>(*pair.ground_truth)), TensorRole::kBinary);
    j["ground_truth"] = "ground_truth.sfid";
  }
  const fs::path manifest = dir / "manifest.json";
  std::ofstream out(manifest, std::ios::trunc);
  if (!out) throw IoError("cannot write " + manifest.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + manifest.string());
  return manifest;
}

}  // namespace sfid
