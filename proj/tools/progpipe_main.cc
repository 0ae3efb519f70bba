/*
 * Copyright 2026 The progpipe Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// progpipe: synthetic cohort generation, pipeline search experiments,
// training, prediction and report rendering.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "progpipe/error.h"
#include "progpipe/experiment.h"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitInternal = 4;

void print_written(const std::vector<std::string>& paths) {
  for (const auto& p : paths) std::cout << p << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  using namespace progpipe;
  CLI::App app{"Pipeline search for readmission and wound-recurrence prediction"};
  app.set_version_flag("--version", std::string(PROGPIPE_VERSION));
  app.require_subcommand(1);

  // synthgen
  std::optional<std::string> spec_path;
  std::string synth_out;
  std::optional<std::uint64_t> synth_seed;
  auto* synth = app.add_subcommand("synthgen", "Generate synthetic wound and episode cohorts");
  synth->add_option("--spec", spec_path, "Cohort spec JSON (defaults built in)");
  synth->add_option("--out,--out-dir", synth_out, "Output directory")->required();
  synth->add_option("--seed", synth_seed, "Root seed (overrides the cohort spec)");

  // Options shared by experiment and train.
  std::optional<std::string> space_path;
  std::string data_dir;
  std::string out;
  std::uint64_t seed = 0;
  std::size_t budget = 0;
  std::string strategy = "exhaustive";
  std::optional<std::string> granularity;
  std::optional<std::string> task;
  std::optional<int> k_folds;
  auto add_search_flags = [&](CLI::App* cmd) {
    cmd->add_option("--space", space_path, "Search space JSON (defaults built in)");
    cmd->add_option("--data-dir", data_dir, "Directory holding the cohort CSVs")->required();
    cmd->add_option("--seed", seed, "Root seed");
    cmd->add_option("--budget", budget, "Candidate budget for random and halving");
    cmd->add_option("--strategy", strategy, "exhaustive | random | halving")
        ->check(CLI::IsMember({"exhaustive", "random", "halving"}));
    cmd->add_option("--granularity", granularity, "wound | episode | combined")
        ->check(CLI::IsMember({"wound", "episode", "combined"}));
    cmd->add_option("--task", task, "recurrence | category | weeks")
        ->check(CLI::IsMember({"recurrence", "category", "weeks"}));
    cmd->add_option("--k-folds", k_folds, "Cross-validation folds (default 5)")
        ->check(CLI::Range(2, 100));
  };

  auto* experiment = app.add_subcommand("experiment", "Compare the four methods per task");
  add_search_flags(experiment);
  experiment->add_option("--out", out, "Report directory")->required();

  auto* train = app.add_subcommand("train", "Search and write a pipeline bundle");
  add_search_flags(train);
  train->add_option("--out", out, "Bundle path")->required();

  std::string bundle, input;
  auto* predict = app.add_subcommand("predict", "Score a CSV with a pipeline bundle");
  predict->add_option("--bundle", bundle, "Pipeline bundle JSON")->required();
  predict->add_option("--input", input, "Input CSV")->required();
  predict->add_option("--out", out, "Output CSV")->required();

  std::string report_dir;
  auto* report = app.add_subcommand("report", "Render experiment reports into summary.txt");
  report->add_option("--out,--dir", report_dir, "Directory holding report JSON files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*synth) {
      print_written(cmd_synthgen({spec_path, synth_out, synth_seed}));
    } else if (*experiment) {
      ExperimentOptions options;
      options.space_path = space_path;
      options.data_dir = data_dir;
      options.out_dir = out;
      options.seed = seed;
      options.strategy = parse_strategy(strategy);
      options.budget = budget;
      options.k_folds = k_folds;
      if (granularity) options.granularity = parse_granularity(*granularity);
      if (task) options.task = parse_target(*task);
      print_written(cmd_experiment(options));
    } else if (*train) {
      TrainOptions options;
      options.space_path = space_path;
      options.data_dir = data_dir;
      options.out_path = out;
      options.seed = seed;
      options.strategy = parse_strategy(strategy);
      options.budget = budget;
      options.k_folds = k_folds;
      if (granularity) options.granularity = parse_granularity(*granularity);
      if (task) options.task = parse_target(*task);
      print_written(cmd_train(options));
    } else if (*predict) {
      print_written(cmd_predict(bundle, input, out));
    } else if (*report) {
      print_written(cmd_report(report_dir));
    }
  } catch (const Error& e) {
    std::cerr << "progpipe: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "progpipe: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return 0;
}
