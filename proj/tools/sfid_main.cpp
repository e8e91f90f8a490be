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

// sfid: batch change detection over scene-pair manifests.
//
//   sfid run   --input <dir|manifest>... --output-dir <dir> [options]
//   sfid eval  --pred <dir> --gt <dir> [--out <dir>]
//   sfid synth --out <dir> --count N [generator options]
//
// Exit codes: 0 success, 1 some pairs failed, 2 invalid configuration.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sfid/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitConfig = 2;

nlohmann::json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw sfid::ConfigError("cannot open config file " + path);
  auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw sfid::ConfigError("config file is not valid JSON: " + path);
  return j;
}

std::size_t env_workers() {
  const char* v = std::getenv("SFID_WORKERS");
  if (v == nullptr || *v == '\0') return 1;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1) throw sfid::ConfigError(std::string("invalid SFID_WORKERS=") + v);
  return static_cast<std::size_t>(n);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SFID change detection over serialized segmentation head outputs"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Detect changes for every scene pair");
  std::string config_file;
  std::vector<std::string> inputs;
  std::string output_dir, strategy, vocabulary;
  double tau_match = 0.5, baseline_threshold = 0.5;
  float background_threshold = 0.5f;
  std::size_t min_area = 0, workers = 1;
  run->add_option("--config", config_file, "JSON config; keys mirror the long options");
  auto* o_input = run->add_option("--input", inputs, "Manifest files or directories");
  auto* o_out = run->add_option("--output-dir", output_dir, "Where masks and run.json go");
  auto* o_vocab = run->add_option("--vocabulary", vocabulary,
                                  "Comma-separated subset of manifest categories");
  auto* o_tau = run->add_option("--tau-match", tau_match, "Overlap ratio for an instance match (0,1]");
  auto* o_bg = run->add_option("--background-threshold", background_threshold,
                               "Gated probability below which a pixel is background");
  auto* o_area = run->add_option("--min-area", min_area, "Drop instances smaller than this");
  auto* o_strategy = run->add_option("--strategy", strategy, "instance | pmc | l1 | l2");
  auto* o_bthr = run->add_option("--baseline-threshold", baseline_threshold,
                                 "Normalized distance threshold for l1/l2");
  auto* o_workers = run->add_option("--workers", workers, "Worker threads (fallback: SFID_WORKERS)");

  // eval
  auto* eval = app.add_subcommand("eval", "Score predicted masks against ground truth");
  std::string pred_dir, gt_dir, report_dir;
  eval->add_option("--pred", pred_dir, "Predicted masks directory")->required();
  eval->add_option("--gt", gt_dir, "Ground truth masks directory")->required();
  eval->add_option("--out", report_dir, "Write eval.json and eval.txt here");

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic scene-pair corpus");
  sfid::SynthConfig sc;
  std::size_t count = 1;
  std::string synth_out;
  synth->add_option("--out", synth_out, "Corpus directory")->required();
  synth->add_option("--count", count, "Number of pairs");
  synth->add_option("--seed", sc.seed, "Seed of the first pair");
  synth->add_option("--height", sc.height);
  synth->add_option("--width", sc.width);
  synth->add_option("--categories", sc.categories);
  synth->add_option("--objects-min", sc.objects_min);
  synth->add_option("--objects-max", sc.objects_max);
  synth->add_option("--change-fraction", sc.change_fraction);
  synth->add_option("--semantic-jitter", sc.noise.semantic_jitter);
  synth->add_option("--confidence-jitter", sc.noise.confidence_jitter);
  synth->add_option("--presence-flip", sc.noise.presence_flip);
  synth->add_option("--illumination", sc.noise.illumination);
  synth->add_option("--speckle", sc.noise.speckle);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run) {
      sfid::RunConfig cfg;
      bool workers_set = false;
      if (!config_file.empty()) {
        const auto j = load_config_file(config_file);
        cfg = sfid::RunConfig::from_json(j);
        workers_set = j.contains("workers");
      }
      if (o_input->count()) cfg.inputs.assign(inputs.begin(), inputs.end());
      if (o_out->count()) cfg.output_dir = output_dir;
      if (o_vocab->count()) {
        cfg.vocabulary.clear();
        std::stringstream ss(vocabulary);
        for (std::string item; std::getline(ss, item, ',');) {
          if (!item.empty()) cfg.vocabulary.push_back(item);
        }
      }
      if (o_tau->count()) cfg.tau_match = tau_match;
      if (o_bg->count()) cfg.background_threshold = background_threshold;
      if (o_area->count()) cfg.min_area = min_area;
      if (o_strategy->count()) cfg.strategy = sfid::parse_strategy(strategy);
      if (o_bthr->count()) cfg.baseline_threshold = baseline_threshold;
      if (o_workers->count()) {
        cfg.workers = workers;
        workers_set = true;
      }
      if (!workers_set) cfg.workers = env_workers();

      const auto result = sfid::run_pipeline(cfg);
      for (const auto& p : result.pairs) {
        if (!p.ok) std::cerr << "failed: " << p.manifest.string() << ": " << p.error << '\n';
      }
      std::cout << result.pairs.size() - result.failed() << "/" << result.pairs.size()
                << " pairs processed, masks in " << cfg.output_dir.string() << '\n';
      return result.exit_code() == 0 ? kExitOk : kExitPartial;
    }

    if (*eval) {
      const auto report = sfid::run_eval(pred_dir, gt_dir);
      std::cout << sfid::to_table(report);
      if (!report_dir.empty()) sfid::write_eval_report(report, report_dir);
      return kExitOk;
    }

    if (*synth) {
      const auto manifests = sfid::write_synthetic_corpus(sc, count, synth_out);
      std::cout << "wrote " << manifests.size() << " pairs to " << synth_out << '\n';
      return kExitOk;
    }
  } catch (const sfid::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPartial;
  }
  return kExitOk;
}
