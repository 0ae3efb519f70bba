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

#include "progpipe/search.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <thread>

#include "progpipe/error.h"
#include "progpipe/random.h"

namespace progpipe {

namespace {

constexpr double kInnerFitFraction = 0.8;

// Expands one learner entry whose values may be scalars or lists.
std::vector<LearnerSpec> expand_learner(const nlohmann::json& entry) {
  check(entry.is_object() || entry.is_string(), ErrorCode::kSpecInvalid,
        "learner entries must be names or objects");
  if (entry.is_string()) return {learner_spec_from_json({{"name", entry}})};
  std::vector<nlohmann::json> points = {nlohmann::json::object()};
  for (const auto& [key, value] : entry.items()) {
    std::vector<nlohmann::json> options;
    if (value.is_array()) {
      check(!value.empty(), ErrorCode::kSpecInvalid, "empty list for learner '" + key + "'");
      options.assign(value.begin(), value.end());
    } else {
      options.push_back(value);
    }
    std::vector<nlohmann::json> next;
    for (const auto& point : points) {
      for (const auto& option : options) {
        nlohmann::json p = point;
        p[key] = option;
        next.push_back(std::move(p));
      }
    }
    points = std::move(next);
  }
  std::vector<LearnerSpec> out;
  for (const auto& point : points) out.push_back(learner_spec_from_json(point));
  return out;
}

bool ranks_before(const LeaderboardEntry& a, const LeaderboardEntry& b) {
  if (a.failed != b.failed) return !a.failed;
  if (!a.failed && a.mean != b.mean) return a.mean > b.mean;
  const int ta = a.config.learner.tree_count();
  const int tb = b.config.learner.tree_count();
  if (ta != tb) return ta < tb;
  return a.config.name() < b.config.name();
}

// Runs fn(i) for i in [0, n) on up to `threads` workers. Results are
// written by index, so completion order does not matter.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::vector<LeaderboardEntry> evaluate_all(const std::vector<PipelineConfig>& configs,
                                           Target target, const Cohort& data, int k,
                                           Metric metric, std::uint64_t seed, int threads) {
  std::vector<LeaderboardEntry> entries(configs.size());
  parallel_for(configs.size(), threads, [&](std::size_t i) {
    LeaderboardEntry& entry = entries[i];
    entry.config = configs[i];
    try {
      CvScore s = cv_score(configs[i], target, data, k, metric, seed);
      entry.fold_scores = std::move(s.folds);
      entry.mean = s.mean;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kFoldFailure) throw;
      entry.failed = true;
      entry.mean = -std::numeric_limits<double>::infinity();
      entry.error = e.what();
    }
  });
  return entries;
}

}  // namespace

void ConfigSpace::validate() const {
  check(!imputers.empty() && !processors.empty() && !learners.empty() && !calibrators.empty(),
        ErrorCode::kEmptySpace, "every stage of the search space needs at least one choice");
  check(k_folds >= 2, ErrorCode::kSpecInvalid, "k_folds must be >= 2");
  check(metric_is_classification(classification_metric) &&
            !metric_is_classification(regression_metric),
        ErrorCode::kSpecInvalid, "metric does not match its task");
}

std::size_t ConfigSpace::grid_size(Task task) const {
  const std::size_t calibrator_count = task == Task::kRegression ? 1 : calibrators.size();
  return imputers.size() * processors.size() * learners.size() * calibrator_count;
}

std::vector<PipelineConfig> ConfigSpace::configs(Task task) const {
  const std::vector<CalibratorType> cal =
      task == Task::kRegression ? std::vector<CalibratorType>{CalibratorType::kNone} : calibrators;
  std::vector<PipelineConfig> out;
  for (const auto& imputer : imputers) {
    for (const auto& processor : processors) {
      for (const auto& learner : learners) {
        for (CalibratorType c : cal) out.push_back({imputer, processor, learner, c});
      }
    }
  }
  return out;
}

ConfigSpace space_from_json(const nlohmann::json& doc) {
  try {
    ConfigSpace space;
    for (const auto& entry : doc.at("imputers")) space.imputers.push_back(imputer_kind_from_json(entry));
    for (const auto& entry : doc.at("processors")) {
      space.processors.push_back(processor_kind_from_json(entry));
    }
    for (const auto& entry : doc.at("learners")) {
      for (auto& spec : expand_learner(entry)) space.learners.push_back(std::move(spec));
    }
    for (const auto& entry : doc.at("calibrators")) {
      space.calibrators.push_back(parse_calibrator(entry.get<std::string>()));
    }
    if (doc.contains("metric")) {
      const Metric metric = parse_metric(doc["metric"].get<std::string>());
      (metric_is_classification(metric) ? space.classification_metric : space.regression_metric) =
          metric;
    }
    if (doc.contains("classification_metric")) {
      space.classification_metric = parse_metric(doc["classification_metric"].get<std::string>());
    }
    if (doc.contains("regression_metric")) {
      space.regression_metric = parse_metric(doc["regression_metric"].get<std::string>());
    }
    space.k_folds = doc.value("k_folds", space.k_folds);
    space.validate();
    return space;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kSpecInvalid, std::string("malformed search space: ") + e.what());
  }
}

nlohmann::json space_to_json(const ConfigSpace& space) {
  nlohmann::json doc;
  doc["imputers"] = nlohmann::json::array();
  for (const auto& k : space.imputers) doc["imputers"].push_back(to_json(k));
  doc["processors"] = nlohmann::json::array();
  for (const auto& k : space.processors) doc["processors"].push_back(to_json(k));
  doc["learners"] = nlohmann::json::array();
  for (const auto& k : space.learners) doc["learners"].push_back(to_json(k));
  doc["calibrators"] = nlohmann::json::array();
  for (auto c : space.calibrators) doc["calibrators"].push_back(std::string(to_string(c)));
  doc["classification_metric"] = std::string(to_string(space.classification_metric));
  doc["regression_metric"] = std::string(to_string(space.regression_metric));
  doc["k_folds"] = space.k_folds;
  return doc;
}

ConfigSpace load_space(const std::string& path) {
  std::ifstream in(path);
  check(in.good(), ErrorCode::kIo, "cannot open search space '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kSpecInvalid, "search space '" + path + "' is not valid JSON: " + e.what());
  }
  return space_from_json(doc);
}

ConfigSpace default_space() {
  ConfigSpace space;
  space.imputers = {ImputerKind{ImputerType::kMean}, ImputerKind{ImputerType::kMedian}};
  space.processors = {ProcessorKind{ProcessorType::kOneHotStandardize},
                      ProcessorKind{ProcessorType::kStandardize}};
  LearnerSpec linear;
  LearnerSpec trees;
  trees.type = LearnerType::kGbdtLeafWise;
  space.learners = {linear, trees};
  space.calibrators = {CalibratorType::kNone, CalibratorType::kIsotonic};
  return space;
}

Holdout holdout_split(const Cohort& cohort, double fraction, std::uint64_t seed) {
  const PatientGroups groups = group_by_patient(cohort);
  std::vector<std::size_t> order(groups.ids.size());
  for (std::size_t g = 0; g < order.size(); ++g) order[g] = g;
  // Sort by id first so the result does not depend on record order.
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return groups.ids[a] < groups.ids[b]; });
  Rng rng(seed);
  rng.shuffle(order);
  const double target = fraction * static_cast<double>(cohort.size());
  Holdout out;
  std::vector<bool> first(order.size(), false);
  std::size_t taken = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const bool last_group = i + 1 == order.size();
    if (static_cast<double>(taken) >= target && !(taken == 0)) break;
    if (last_group && i > 0) break;  // keep the second part nonempty
    first[order[i]] = true;
    taken += groups.members[order[i]].size();
  }
  for (std::size_t g = 0; g < order.size(); ++g) {
    auto& part = first[g] ? out.first : out.second;
    part.insert(part.end(), groups.members[g].begin(), groups.members[g].end());
  }
  std::sort(out.first.begin(), out.first.end());
  std::sort(out.second.begin(), out.second.end());
  return out;
}

CvScore cv_score(const PipelineConfig& config, Target target, const Cohort& data, int k,
                 Metric metric, std::uint64_t seed) {
  const std::vector<Fold> folds = kfold_plan(data, k, derive_seed(seed, "cv"));
  CvScore out;
  for (std::size_t i = 0; i < folds.size(); ++i) {
    try {
      const Cohort fold_train = subset(data, folds[i].train);
      const Cohort fold_valid = subset(data, folds[i].valid);
      const Holdout inner = holdout_split(fold_train, kInnerFitFraction,
                                          derive_seed(seed, "calibration", i));
      check(!inner.second.empty(), ErrorCode::kTooFewPatients,
            "fold training part has a single patient");
      const FittedPipeline pipeline =
          fit_final(config, target, subset(fold_train, inner.first),
                    subset(fold_train, inner.second), derive_seed(seed, "fit", i));
      out.folds.push_back(score(metric, pipeline.predict(fold_valid),
                                label_vector(fold_valid, target)));
    } catch (const Error& e) {
      throw Error(ErrorCode::kFoldFailure, "fold " + std::to_string(i) + ": " + e.what());
    }
  }
  double total = 0.0;
  for (double s : out.folds) total += s;
  out.mean = total / static_cast<double>(out.folds.size());
  return out;
}

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::kExhaustive: return "exhaustive";
    case Strategy::kRandom: return "random";
    case Strategy::kHalving: return "halving";
  }
  return "exhaustive";
}

Strategy parse_strategy(std::string_view text) {
  if (text == "exhaustive") return Strategy::kExhaustive;
  if (text == "random") return Strategy::kRandom;
  if (text == "halving") return Strategy::kHalving;
  fail(ErrorCode::kInvalidArgument, "unknown strategy '" + std::string(text) + "'");
}

int configured_threads() {
  if (const char* env = std::getenv("PROG_PIPE_THREADS")) {
    const int value = std::atoi(env);
    if (value >= 1) return value;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SearchResult search(const ConfigSpace& space, Target target, const Cohort& train,
                    const SearchOptions& options, const Cohort* calibration) {
  space.validate();
  const Task task = task_for(target);
  const Metric metric = space.metric_for(task);
  const std::vector<PipelineConfig> grid = space.configs(task);
  const int threads = options.threads > 0 ? options.threads : configured_threads();

  SearchResult result;
  result.metric = metric;
  result.grid_size = grid.size();

  std::vector<PipelineConfig> candidates = grid;
  if (options.strategy != Strategy::kExhaustive) {
    check(options.budget >= 1, ErrorCode::kInvalidArgument, "budget must be >= 1");
    check(!options.strict_budget || options.budget <= grid.size(), ErrorCode::kBudgetExceedsGrid,
          "budget " + std::to_string(options.budget) + " exceeds grid size " +
              std::to_string(grid.size()));
    const std::size_t budget = std::min(options.budget, grid.size());
    if (budget < grid.size()) {
      Rng rng(derive_seed(options.seed, "sample"));
      std::vector<std::size_t> picks = rng.permutation(grid.size());
      picks.resize(budget);
      std::sort(picks.begin(), picks.end());
      candidates.clear();
      for (std::size_t i : picks) candidates.push_back(grid[i]);
    }
  }

  const std::uint64_t cv_seed = derive_seed(options.seed, "cv-score");
  if (options.strategy == Strategy::kHalving) {
    check(options.eta > 1.0, ErrorCode::kInvalidArgument, "eta must be > 1");
    std::vector<LeaderboardEntry> rung;
    int level = 0;
    for (double fraction : {0.25, 0.5, 1.0}) {
      const Cohort* data = &train;
      Cohort sample;
      if (fraction < 1.0) {
        const Holdout h = holdout_split(train, fraction, derive_seed(options.seed, "halving", level));
        sample = subset(train, h.first);
        // Too few patients for a fold plan: go straight to the full data.
        if (group_by_patient(sample).ids.size() < 2 * static_cast<std::size_t>(space.k_folds)) {
          ++level;
          continue;
        }
        data = &sample;
      }
      rung = evaluate_all(candidates, target, *data, space.k_folds, metric, cv_seed, threads);
      result.evaluations += rung.size();
      std::stable_sort(rung.begin(), rung.end(), ranks_before);
      if (fraction < 1.0) {
        const std::size_t keep = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(static_cast<double>(rung.size()) / options.eta)));
        candidates.clear();
        for (std::size_t i = 0; i < keep && i < rung.size(); ++i) candidates.push_back(rung[i].config);
      }
      ++level;
    }
    result.leaderboard = std::move(rung);
  } else {
    result.leaderboard = evaluate_all(candidates, target, train, space.k_folds, metric, cv_seed, threads);
    result.evaluations = result.leaderboard.size();
    std::stable_sort(result.leaderboard.begin(), result.leaderboard.end(), ranks_before);
  }

  const LeaderboardEntry& head = result.leaderboard.front();
  check(!head.failed, ErrorCode::kFoldFailure, "every candidate failed; first error: " + head.error);
  const std::uint64_t fit_seed = derive_seed(options.seed, "final-fit");
  if (calibration != nullptr) {
    result.best = fit_final(head.config, target, train, *calibration, fit_seed);
  } else {
    const Holdout inner =
        holdout_split(train, kInnerFitFraction, derive_seed(options.seed, "final-calibration"));
    const Cohort cal = inner.second.empty() ? train : subset(train, inner.second);
    result.best = fit_final(head.config, target, subset(train, inner.first), cal, fit_seed);
  }
  return result;
}

nlohmann::json leaderboard_to_json(const std::vector<LeaderboardEntry>& leaderboard) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& entry : leaderboard) {
    nlohmann::json item = {{"config", entry.config.name()}};
    if (entry.failed) {
      item["mean"] = nullptr;
      item["error"] = entry.error;
    } else {
      item["mean"] = entry.mean;
      item["folds"] = entry.fold_scores;
    }
    out.push_back(std::move(item));
  }
  return out;
}

}  // namespace progpipe
