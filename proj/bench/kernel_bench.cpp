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

#include <benchmark/benchmark.h>

#include <vector>

#include "sfid/change.hpp"
#include "sfid/fusion.hpp"
#include "sfid/metrics.hpp"
#include "sfid/pipeline.hpp"
#include "sfid/rng.hpp"

namespace {

using namespace sfid;

ProbMap noise_map(Rng& rng, std::size_t side) {
  ProbMap m(side, side);
  for (auto& v : m.values()) v = static_cast<float>(rng.uniform());
  return m;
}

BinaryMask noise_mask(Rng& rng, std::size_t side, double density) {
  BinaryMask m(side, side);
  for (auto& v : m.values()) v = rng.chance(density) ? 1 : 0;
  return m;
}

std::vector<InstanceQuery> make_queries(Rng& rng, std::size_t n, std::size_t side) {
  std::vector<InstanceQuery> q;
  for (std::size_t k = 0; k < n; ++k) q.push_back({noise_map(rng, side), static_cast<float>(rng.uniform())});
  return q;
}

std::size_t side_of(const benchmark::State& state) { return static_cast<std::size_t>(state.range(0)); }

void set_threads(const benchmark::State& state) { set_kernel_threads(static_cast<int>(state.range(1))); }

void BM_Aggregate(benchmark::State& state) {
  Rng rng(1);
  const auto side = side_of(state);
  const auto queries = make_queries(rng, 8, side);
  set_threads(state);
  for (auto _ : state) benchmark::DoNotOptimize(aggregate_instances(queries, side, side));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(side * side));
}

void BM_AggregateSerial(benchmark::State& state) {
  Rng rng(1);
  const auto side = side_of(state);
  const auto queries = make_queries(rng, 8, side);
  for (auto _ : state) benchmark::DoNotOptimize(reference::aggregate_instances(queries, side, side));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(side * side));
}

void BM_Fuse(benchmark::State& state) {
  Rng rng(2);
  const auto side = side_of(state);
  const auto a = noise_map(rng, side), b = noise_map(rng, side);
  set_threads(state);
  for (auto _ : state) benchmark::DoNotOptimize(fuse_semantic_instance(a, b));
}

void BM_FuseSerial(benchmark::State& state) {
  Rng rng(2);
  const auto side = side_of(state);
  const auto a = noise_map(rng, side), b = noise_map(rng, side);
  for (auto _ : state) benchmark::DoNotOptimize(reference::fuse_semantic_instance(a, b));
}

void BM_Gate(benchmark::State& state) {
  Rng rng(3);
  const auto side = side_of(state);
  const std::vector<ProbMap> fused = {noise_map(rng, side), noise_map(rng, side), noise_map(rng, side)};
  const std::vector<float> presence = {0.9f, 0.4f, 1.0f};
  set_threads(state);
  for (auto _ : state) benchmark::DoNotOptimize(gate_and_label(fused, presence, 0.5f));
}

void BM_GateSerial(benchmark::State& state) {
  Rng rng(3);
  const auto side = side_of(state);
  const std::vector<ProbMap> fused = {noise_map(rng, side), noise_map(rng, side), noise_map(rng, side)};
  const std::vector<float> presence = {0.9f, 0.4f, 1.0f};
  for (auto _ : state) benchmark::DoNotOptimize(reference::gate_and_label(fused, presence, 0.5f));
}

void BM_LogitDistance(benchmark::State& state) {
  Rng rng(4);
  const auto side = side_of(state);
  const std::vector<ProbMap> s1 = {noise_map(rng, side), noise_map(rng, side)};
  const std::vector<ProbMap> s2 = {noise_map(rng, side), noise_map(rng, side)};
  set_threads(state);
  for (auto _ : state) benchmark::DoNotOptimize(detect_changes_logit(s1, s2, Norm::kL2, 0.5));
}

void BM_LogitDistanceSerial(benchmark::State& state) {
  Rng rng(4);
  const auto side = side_of(state);
  const std::vector<ProbMap> s1 = {noise_map(rng, side), noise_map(rng, side)};
  const std::vector<ProbMap> s2 = {noise_map(rng, side), noise_map(rng, side)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::detect_changes_logit(s1, s2, Norm::kL2, 0.5));
  }
}

void BM_Confusion(benchmark::State& state) {
  Rng rng(5);
  const auto side = side_of(state);
  const auto p = noise_mask(rng, side, 0.3), g = noise_mask(rng, side, 0.3);
  set_threads(state);
  for (auto _ : state) benchmark::DoNotOptimize(confusion_counts(p, g));
}

void BM_ConfusionSerial(benchmark::State& state) {
  Rng rng(5);
  const auto side = side_of(state);
  const auto p = noise_mask(rng, side, 0.3), g = noise_mask(rng, side, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(reference::confusion_counts(p, g));
}

void BM_ConnectedComponents(benchmark::State& state) {
  Rng rng(6);
  const auto m = noise_mask(rng, side_of(state), 0.45);
  for (auto _ : state) benchmark::DoNotOptimize(connected_components(m, 0));
}

void BM_ConnectedComponentsOracle(benchmark::State& state) {
  Rng rng(6);
  const auto m = noise_mask(rng, side_of(state), 0.45);
  for (auto _ : state) benchmark::DoNotOptimize(oracle_connected_components(m));
}

void BM_ProcessScenePair(benchmark::State& state) {
  SynthConfig cfg;
  cfg.seed = 7;
  cfg.height = cfg.width = side_of(state);
  cfg.noise = {0.1, 0.1, 0.0, 0.1, 0.05};
  const auto pair = generate_scene_pair(cfg);
  set_threads(state);
  for (auto _ : state) benchmark::DoNotOptimize(process_scene_pair(pair, RunConfig{}));
}

void parallel_args(benchmark::internal::Benchmark* b) {
  for (long side : {256, 1024}) {
    for (long threads : {1, 2, 4}) b->Args({side, threads});
  }
}

void serial_args(benchmark::internal::Benchmark* b) {
  for (long side : {256, 1024}) b->Args({side});
}

BENCHMARK(BM_Aggregate)->Apply(parallel_args);
BENCHMARK(BM_AggregateSerial)->Apply(serial_args);
BENCHMARK(BM_Fuse)->Apply(parallel_args);
BENCHMARK(BM_FuseSerial)->Apply(serial_args);
BENCHMARK(BM_Gate)->Apply(parallel_args);
BENCHMARK(BM_GateSerial)->Apply(serial_args);
BENCHMARK(BM_LogitDistance)->Apply(parallel_args);
BENCHMARK(BM_LogitDistanceSerial)->Apply(serial_args);
BENCHMARK(BM_Confusion)->Apply(parallel_args);
BENCHMARK(BM_ConfusionSerial)->Apply(serial_args);
BENCHMARK(BM_ConnectedComponents)->Args({256})->Args({1024});
BENCHMARK(BM_ConnectedComponentsOracle)->Args({256})->Args({1024});
BENCHMARK(BM_ProcessScenePair)->Args({256, 1})->Args({256, 4});

}  // namespace

BENCHMARK_MAIN();
