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

#include "sfid/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "sfid/rng.hpp"

namespace sfid {

void SynthConfig::validate() const {
  if (height < 8 || width < 8) throw ConfigError("synthetic scenes need dims >= 8");
  if (categories == 0) throw ConfigError("synthetic scenes need at least one category");
  if (objects_min > objects_max) throw ConfigError("objects_min exceeds objects_max");
  auto unit = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0,1]");
  };
  unit(change_fraction, "change_fraction");
  unit(noise.semantic_jitter, "semantic_jitter");
  unit(noise.confidence_jitter, "confidence_jitter");
  unit(noise.presence_flip, "presence_flip");
  unit(noise.illumination, "illumination");
  unit(noise.speckle, "speckle");
}

std::string synth_category_name(std::size_t c) {
  static constexpr std::array<const char*, 6> kNames = {
      "building", "tree", "water", "low_vegetation", "surface", "playground"};
  return c < kNames.size() ? kNames[c] : "class" + std::to_string(c);
}

namespace {

struct Shape {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<Pixel> offsets;  // relative to the top-left corner, row-major
};

struct Placed {
  std::size_t category = 0;
  std::size_t row = 0;
  std::size_t col = 0;
  const Shape* shape = nullptr;
};

enum class ChangeKind { kNone, kAppear, kDisappear, kRelocate };

Shape make_shape(Rng& rng, std::size_t max_side) {
  Shape s;
  s.height = rng.between(3, max_side);
  s.width = rng.between(3, max_side);
  const auto kind = rng.between(0, 2);
  if (kind == 0) {
    for (std::uint32_t r = 0; r < s.height; ++r) {
      for (std::uint32_t c = 0; c < s.width; ++c) s.offsets.push_back({r, c});
    }
    return s;
  }
  // Random-walk blob grown from the box centre; 4- or 8-connected steps.
  const bool diagonal = kind == 2;
  Grid<std::uint8_t> in(s.height, s.width, 0);
  std::vector<Pixel> grown{{static_cast<std::uint32_t>(s.height / 2),
                            static_cast<std::uint32_t>(s.width / 2)}};
  in(grown[0].row, grown[0].col) = 1;
  const std::size_t target = std::max<std::size_t>(3, s.height * s.width * 3 / 5);
  const int steps = diagonal ? 8 : 4;
  static constexpr int kDy[] = {-1, 1, 0, 0, -1, -1, 1, 1};
  static constexpr int kDx[] = {0, 0, -1, 1, -1, 1, -1, 1};
  while (grown.size() < target) {
    const Pixel from = grown[rng.between(0, grown.size() - 1)];
    const auto dir = rng.between(0, static_cast<std::uint64_t>(steps - 1));
    const long r = static_cast<long>(from.row) + kDy[dir];
    const long c = static_cast<long>(from.col) + kDx[dir];
    if (r < 0 || c < 0 || r >= static_cast<long>(s.height) || c >= static_cast<long>(s.width)) {
      continue;
    }
    if (in(r, c)) continue;
    in(r, c) = 1;
    grown.push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c)});
  }
  std::sort(grown.begin(), grown.end());
  s.offsets = std::move(grown);
  return s;
}

class Occupancy {
 public:
  Occupancy(std::size_t h, std::size_t w) : taken_(h, w, 0) {}

  // Finds a free spot keeping one pixel of clearance around the box.
  bool place(Rng& rng, const Shape& s, std::size_t& row, std::size_t& col) {
    const std::size_t h = taken_.height(), w = taken_.width();
    if (s.height > h || s.width > w) return false;
    for (int attempt = 0; attempt < 400; ++attempt) {
      const std::size_t r0 = rng.between(0, h - s.height);
      const std::size_t c0 = rng.between(0, w - s.width);
      if (free(r0, c0, s)) {
        for (std::size_t r = r0; r < r0 + s.height; ++r) {
          for (std::size_t c = c0; c < c0 + s.width; ++c) taken_(r, c) = 1;
        }
        row = r0;
        col = c0;
        return true;
      }
    }
    return false;
  }

 private:
  bool free(std::size_t r0, std::size_t c0, const Shape& s) const {
    const std::size_t rlo = r0 == 0 ? 0 : r0 - 1;
    const std::size_t clo = c0 == 0 ? 0 : c0 - 1;
    const std::size_t rhi = std::min(taken_.height(), r0 + s.height + 1);
    const std::size_t chi = std::min(taken_.width(), c0 + s.width + 1);
    for (std::size_t r = rlo; r < rhi; ++r) {
      for (std::size_t c = clo; c < chi; ++c) {
        if (taken_(r, c)) return false;
      }
    }
    return true;
  }

  Grid<std::uint8_t> taken_;
};

float clamp_unit(double v) { return static_cast<float>(std::clamp(v, 0.0, 1.0)); }

// Renders one epoch's head outputs from its placed objects.
EpochOutputs render_epoch(Rng& rng, const SynthConfig& cfg, const std::vector<Placed>& objects,
                          bool apply_illumination) {
  const std::size_t h = cfg.height, w = cfg.width, cats = cfg.categories;
  const auto& noise = cfg.noise;
  EpochOutputs e;
  e.semantic.assign(cats, ProbMap(h, w, kSynthBackgroundProb));
  e.queries.resize(cats);
  e.presence.assign(cats, 0.0f);

  for (const auto& obj : objects) {
    ProbMap query(h, w, 0.0f);
    for (const auto& p : obj.shape->offsets) {
      const std::size_t r = obj.row + p.row, c = obj.col + p.col;
      e.semantic[obj.category](r, c) = kSynthObjectProb;
      query(r, c) = kSynthQueryProb;
    }
    const float conf = clamp_unit(1.0 - rng.uniform() * noise.confidence_jitter);
    e.queries[obj.category].push_back({std::move(query), conf});
    e.presence[obj.category] = 1.0f;
  }

  if (noise.speckle > 0.0) {
    // Weak misclassification: both heads dip just below the decision level.
    for (std::size_t k = 0; k < objects.size(); ++k) {
      const auto& obj = objects[k];
      auto& sem = e.semantic[obj.category];
      // Queries of a category are stored in object order.
      std::size_t index = 0;
      for (std::size_t j = 0; j < k; ++j) index += objects[j].category == obj.category;
      auto& query = e.queries[obj.category][index].map;
      for (const auto& p : obj.shape->offsets) {
        if (!rng.chance(noise.speckle)) continue;
        const std::size_t r = obj.row + p.row, c = obj.col + p.col;
        const float v = static_cast<float>(rng.uniform(0.40, 0.49));
        sem(r, c) = v;
        query(r, c) = v;
      }
    }
  }

  if (noise.semantic_jitter > 0.0) {
    for (auto& m : e.semantic) {
      for (auto& v : m.values()) {
        v = clamp_unit(v + rng.uniform(-noise.semantic_jitter, noise.semantic_jitter));
      }
    }
  }

  if (apply_illumination && noise.illumination > 0.0) {
    // Linear ramp along a random direction, 0 at one corner and `illumination` at the opposite.
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double dy = std::sin(angle), dx = std::cos(angle);
    double lo = 0.0, hi = 0.0;
    for (double r : {0.0, double(h - 1)}) {
      for (double c : {0.0, double(w - 1)}) {
        lo = std::min(lo, r * dy + c * dx);
        hi = std::max(hi, r * dy + c * dx);
      }
    }
    lo = std::min(lo, 0.0);
    for (auto& m : e.semantic) {
      for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
          const double t = hi > lo ? (double(r) * dy + double(c) * dx - lo) / (hi - lo) : 0.0;
          m(r, c) = clamp_unit(m(r, c) + noise.illumination * t);
        }
      }
    }
  }

  for (auto& p : e.presence) {
    if (noise.presence_flip > 0.0 && rng.chance(noise.presence_flip)) p = 1.0f - p;
  }
  return e;
}

}  // namespace

ScenePair generate_scene_pair(const SynthConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const std::size_t max_side = std::max<std::size_t>(3, std::min(cfg.height, cfg.width) / 5);

  const std::size_t count = rng.between(cfg.objects_min, cfg.objects_max);
  std::vector<Shape> shapes;
  shapes.reserve(count);
  for (std::size_t i = 0; i < count; ++i) shapes.push_back(make_shape(rng, max_side));

  std::vector<std::size_t> order(count);
  for (std::size_t i = 0; i < count; ++i) order[i] = i;
  for (std::size_t i = count; i > 1; --i) std::swap(order[i - 1], order[rng.between(0, i - 1)]);
  const auto changed = static_cast<std::size_t>(std::llround(cfg.change_fraction * double(count)));

  std::vector<ChangeKind> kind(count, ChangeKind::kNone);
  for (std::size_t i = 0; i < changed; ++i) {
    kind[order[i]] = static_cast<ChangeKind>(1 + rng.between(0, 2));
  }

  Occupancy occupancy(cfg.height, cfg.width);
  std::vector<Placed> t1, t2;
  std::vector<Placed> changed_objects;
  for (std::size_t i = 0; i < count; ++i) {
    Placed obj{static_cast<std::size_t>(rng.between(0, cfg.categories - 1)), 0, 0, &shapes[i]};
    if (!occupancy.place(rng, shapes[i], obj.row, obj.col)) {
      throw GenerationError("cannot fit object " + std::to_string(i) + " of " +
                            std::to_string(count) + " into " + std::to_string(cfg.height) + "x" +
                            std::to_string(cfg.width));
    }
    switch (kind[i]) {
      case ChangeKind::kNone:
        t1.push_back(obj);
        t2.push_back(obj);
        break;
      case ChangeKind::kAppear:
        t2.push_back(obj);
        changed_objects.push_back(obj);
        break;
      case ChangeKind::kDisappear:
        t1.push_back(obj);
        changed_objects.push_back(obj);
        break;
      case ChangeKind::kRelocate: {
        Placed moved = obj;
        if (!occupancy.place(rng, shapes[i], moved.row, moved.col)) {
          throw GenerationError("cannot fit relocated object " + std::to_string(i));
        }
        t1.push_back(obj);
        t2.push_back(moved);
        changed_objects.push_back(obj);
        changed_objects.push_back(moved);
        break;
      }
    }
  }

  ScenePair pair;
  char id[32];
  std::snprintf(id, sizeof id, "synth_%016llx", static_cast<unsigned long long>(cfg.seed));
  pair.pair_id = id;
  pair.height = cfg.height;
  pair.width = cfg.width;
  for (std::size_t c = 0; c < cfg.categories; ++c) pair.vocabulary.push_back(synth_category_name(c));
  pair.t1 = render_epoch(rng, cfg, t1, false);
  pair.t2 = render_epoch(rng, cfg, t2, true);

  std::vector<BinaryMask> truth(cfg.categories, BinaryMask(cfg.height, cfg.width, 0));
  for (const auto& obj : changed_objects) {
    for (const auto& p : obj.shape->offsets) truth[obj.category](obj.row + p.row, obj.col + p.col) = 1;
  }
  pair.ground_truth = std::move(truth);
  return pair;
}

}  // namespace sfid
