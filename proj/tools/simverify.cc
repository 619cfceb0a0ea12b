// Copyright 2026 The simverify Authors
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


// Repeated-sampling experiments for the verification measures.
//
//   simverify run --preset desk --out rows.csv [--threads 4] [--base-seed 7]
//   simverify run --config experiment.json --out rows.csv
//   simverify summarize --in rows.csv --out summary.csv

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "simverify/harness/experiment.h"

namespace {

using simverify::harness::ExperimentConfig;

int Run(const std::string& config_path, const std::string& preset,
        std::optional<int> threads, std::optional<uint64_t> base_seed,
        const std::string& out_path) {
  ExperimentConfig config;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    nlohmann::json json = nlohmann::json::parse(in, nullptr, false);
    if (json.is_discarded()) {
      std::cerr << "Config is not valid JSON: " << config_path << "\n";
      return EXIT_FAILURE;
    }
    auto parsed = simverify::harness::ParseExperimentConfig(json);
    if (!parsed.ok()) {
      std::cerr << parsed.status() << "\n";
      return EXIT_FAILURE;
    }
    config = *parsed;
  } else {
    config = preset == "paper" ? simverify::harness::FullScalePreset()
                               : simverify::harness::DeskPreset();
  }
  if (threads) config.threads = *threads;
  if (base_seed) config.base_seed = *base_seed;

  auto rows = simverify::harness::RunExperiment(config);
  if (!rows.ok()) {
    std::cerr << rows.status() << "\n";
    return EXIT_FAILURE;
  }
  std::ofstream out(out_path);
  simverify::harness::WriteReplicateCsv(*rows, out);
  if (!out) {
    std::cerr << "Cannot write " << out_path << "\n";
    return EXIT_FAILURE;
  }
  return EXIT_SUCCESS;
}

int Summarize(const std::string& in_path, const std::string& out_path) {
  std::ifstream in(in_path);
  if (!in) {
    std::cerr << "Cannot read " << in_path << "\n";
    return EXIT_FAILURE;
  }
  auto rows = simverify::harness::ReadReplicateCsv(in);
  if (!rows.ok()) {
    std::cerr << rows.status() << "\n";
    return EXIT_FAILURE;
  }
  auto summaries = simverify::harness::Summarize(*rows);
  if (!summaries.ok()) {
    std::cerr << summaries.status() << "\n";
    return EXIT_FAILURE;
  }
  std::ofstream out(out_path);
  simverify::harness::WriteSummaryCsv(*summaries, out);
  if (!out) {
    std::cerr << "Cannot write " << out_path << "\n";
    return EXIT_FAILURE;
  }
  return EXIT_SUCCESS;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation harness for differentially private verification"};
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "Run an experiment grid");
  std::string config_path, preset = "desk", out_path;
  std::optional<int> threads;
  std::optional<uint64_t> base_seed;
  run->add_option("--config", config_path, "Experiment config (JSON)")
      ->check(CLI::ExistingFile);
  run->add_option("--preset", preset, "Built-in config when --config is absent")
      ->check(CLI::IsMember({"desk", "paper"}));
  run->add_option("--threads", threads, "Worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
  run->add_option("--base-seed", base_seed, "Overrides the config's base seed");
  run->add_option("--out", out_path, "Replicate CSV to write")->required();

  CLI::App* summarize = app.add_subcommand("summarize", "Per-cell summary");
  std::string in_path, summary_path;
  summarize->add_option("--in", in_path, "Replicate CSV")->required();
  summarize->add_option("--out", summary_path, "Summary CSV to write")
      ->required();

  CLI11_PARSE(app, argc, argv);
  if (run->parsed()) {
    return Run(config_path, preset, threads, base_seed, out_path);
  }
  return Summarize(in_path, summary_path);
}
