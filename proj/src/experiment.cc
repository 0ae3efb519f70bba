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

#include "progpipe/experiment.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "progpipe/csv.h"
#include "progpipe/error.h"
#include "progpipe/random.h"

namespace progpipe {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t kLeaderboardShown = 5;
constexpr std::size_t kImportanceShown = 10;

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  check(!ec, ErrorCode::kIo, "cannot create directory '" + dir + "': " + ec.message());
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  check(out.good(), ErrorCode::kIo, "cannot write '" + path + "'");
  out << text;
  check(out.good(), ErrorCode::kIo, "failed writing '" + path + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  check(in.good(), ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const std::string& path) {
  try {
    return nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kSpecInvalid, "'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string hash_hex(const std::string& text) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(text)));
  return buf;
}

// One manifest per command run. Only the manifest carries timestamps.
class Manifest {
 public:
  Manifest(std::string command, nlohmann::json inputs)
      : command_(std::move(command)), inputs_(std::move(inputs)), started_(utc_timestamp()) {}

  void write(const std::string& path, const std::vector<std::string>& artifacts) const {
    nlohmann::json hashes = nlohmann::json::object();
    for (const auto& artifact : artifacts) {
      hashes[fs::path(artifact).filename().string()] = "fnv1a64:" + hash_hex(read_text(artifact));
    }
    const nlohmann::json doc = {{"command", command_},
                                {"tool_version", PROGPIPE_VERSION},
                                {"inputs", inputs_},
                                {"started", started_},
                                {"finished", utc_timestamp()},
                                {"artifacts", hashes}};
    write_text(path, doc.dump(2) + "\n");
  }

 private:
  std::string command_;
  nlohmann::json inputs_;
  std::string started_;
};

std::string class_name(Target task, int positive) {
  if (task == Target::kRecurrence) {
    return std::string(to_string(positive ? Recurrence::kRecurringWound : Recurrence::kNewWound));
  }
  return std::string(to_string(positive ? Category::kReAdmitPatient : Category::kNewPatient));
}

ConfigSpace resolve_space(const std::optional<std::string>& path, std::optional<int> k_folds) {
  ConfigSpace space = path ? load_space(*path) : default_space();
  if (k_folds) space.k_folds = *k_folds;
  space.validate();
  return space;
}

nlohmann::json importance_json(const std::vector<std::pair<std::string, double>>& ranked) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i = 0; i < ranked.size() && i < kImportanceShown; ++i) {
    out.push_back({{"feature", ranked[i].first}, {"score", ranked[i].second}});
  }
  return out;
}

std::string fixed(double value, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

std::string pad(const std::string& text, std::size_t width) {
  return text.size() >= width ? text + " " : text + std::string(width - text.size(), ' ');
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<std::string> cmd_synthgen(const SynthgenOptions& options) {
  CohortSpec spec = options.spec_path ? spec_from_json(read_json(*options.spec_path))
                                      : default_spec();
  if (options.seed) spec.seed = *options.seed;
  spec.validate();
  Manifest manifest("synthgen", {{"spec_path", options.spec_path.value_or("")},
                                 {"spec", spec_to_json(spec)},
                                 {"seed", spec.seed}});
  ensure_dir(options.out_dir);
  const SynthCohorts cohorts = generate(spec);
  const Cohort combined = join_wound_episode(cohorts.wound, cohorts.episode);

  std::vector<std::string> written;
  auto emit_cohort = [&](const Cohort& cohort, const char* csv_name, const char* schema_name) {
    written.push_back(join_path(options.out_dir, csv_name));
    save_cohort(cohort, written.back());
    written.push_back(join_path(options.out_dir, schema_name));
    save_schema(cohort.schema, written.back());
  };
  emit_cohort(cohorts.wound, kWoundCsv, kWoundSchemaJson);
  emit_cohort(cohorts.episode, kEpisodeCsv, kEpisodeSchemaJson);
  emit_cohort(combined, kCombinedCsv, kCombinedSchemaJson);
  {
    std::ostringstream hist;
    write_histograms(cohorts, hist);
    written.push_back(join_path(options.out_dir, kHistogramsCsv));
    write_text(written.back(), hist.str());
  }
  const std::string manifest_path = join_path(options.out_dir, kManifestJson);
  manifest.write(manifest_path, written);
  written.push_back(manifest_path);
  return written;
}

Cohort load_granularity(const std::string& data_dir, Granularity granularity) {
  auto load = [&](const char* csv_name, const char* schema_name) {
    return load_cohort(join_path(data_dir, csv_name),
                       load_schema(join_path(data_dir, schema_name)));
  };
  switch (granularity) {
    case Granularity::kWound: return load(kWoundCsv, kWoundSchemaJson);
    case Granularity::kEpisode: return load(kEpisodeCsv, kEpisodeSchemaJson);
    case Granularity::kCombined:
      return join_wound_episode(load(kWoundCsv, kWoundSchemaJson),
                                load(kEpisodeCsv, kEpisodeSchemaJson));
  }
  fail(ErrorCode::kInternal, "unknown granularity");
}

void check_task_granularity(Granularity granularity, Target target) {
  check(target != Target::kRecurrence || granularity == Granularity::kWound,
        ErrorCode::kInvalidTaskGranularity,
        "the recurrence task needs wound-level data, not " + std::string(to_string(granularity)));
}

std::vector<MethodSpace> method_spaces(const ConfigSpace& space) {
  space.validate();
  std::vector<LearnerSpec> linear, leafwise, non_tree;
  for (const auto& learner : space.learners) {
    if (learner.type == LearnerType::kLinear) linear.push_back(learner);
    if (learner.type == LearnerType::kGbdtLeafWise) leafwise.push_back(learner);
    if (!learner.is_tree()) non_tree.push_back(learner);
  }
  if (linear.empty()) linear.push_back(LearnerSpec{});
  if (leafwise.empty()) {
    LearnerSpec trees;
    trees.type = LearnerType::kGbdtLeafWise;
    leafwise.push_back(trees);
  }
  if (non_tree.empty()) non_tree = linear;

  ConfigSpace single = space;
  single.imputers = {space.imputers.front()};
  single.processors = {space.processors.front()};
  single.calibrators = {space.calibrators.front()};

  std::vector<MethodSpace> out;
  out.push_back({"linear-only", single});
  out.back().space.learners = linear;
  out.push_back({"tree-only", single});
  out.back().space.learners = leafwise;
  out.push_back({"base-space", space});
  out.back().space.learners = non_tree;
  out.push_back({"extended-space", space});
  return out;
}

std::vector<std::pair<Granularity, Target>> experiment_matrix(const ExperimentOptions& options) {
  if (options.granularity && options.task) {
    check_task_granularity(*options.granularity, *options.task);
    return {{*options.granularity, *options.task}};
  }
  const std::vector<std::pair<Granularity, Target>> all = {
      {Granularity::kWound, Target::kRecurrence},   {Granularity::kWound, Target::kCategory},
      {Granularity::kWound, Target::kWeeks},        {Granularity::kEpisode, Target::kCategory},
      {Granularity::kEpisode, Target::kWeeks},      {Granularity::kCombined, Target::kCategory},
      {Granularity::kCombined, Target::kWeeks}};
  std::vector<std::pair<Granularity, Target>> out;
  for (const auto& pair : all) {
    if (options.granularity && pair.first != *options.granularity) continue;
    if (options.task && pair.second != *options.task) continue;
    out.push_back(pair);
  }
  return out;
}

nlohmann::json run_experiment(const Cohort& cohort, Granularity granularity, Target task,
                              const ConfigSpace& space, const ExperimentOptions& options) {
  check_task_granularity(granularity, task);
  const Task kind = task_for(task);
  const Cohort labeled = labeled_subset(cohort, task);
  check(!labeled.empty(), ErrorCode::kEmptyCohort,
        "no records carry the " + std::string(label_column(task)) + " label");
  const std::uint64_t pair_seed = derive_seed(
      options.seed, std::string(to_string(granularity)) + "/" + std::string(to_string(task)));
  SplitPlan plan;
  plan.seed = derive_seed(pair_seed, "split");
  const CohortSplit parts = split(labeled, plan);
  const std::vector<double> truth = label_vector(parts.test, task);

  SearchOptions search_options;
  search_options.strategy = options.strategy;
  search_options.budget = options.budget;
  search_options.seed = derive_seed(pair_seed, "search");

  nlohmann::json report;
  report["granularity"] = std::string(to_string(granularity));
  report["task"] = std::string(to_string(task));
  report["label"] = std::string(label_column(task));
  report["kind"] = std::string(to_string(kind));
  report["metric"] = std::string(to_string(space.metric_for(kind)));
  report["rows"] = {{"train", parts.train.size()},
                    {"valid", parts.valid.size()},
                    {"test", parts.test.size()}};
  report["k_folds"] = space.k_folds;
  report["strategy"] = std::string(to_string(options.strategy));
  report["budget"] = options.budget;
  report["seed"] = options.seed;
  if (kind == Task::kClassification) {
    report["classes"] = {class_name(task, 0), class_name(task, 1)};
  }

  nlohmann::json methods = nlohmann::json::array();
  std::optional<FittedPipeline> extended_best;
  for (const MethodSpace& method : method_spaces(space)) {
    const SearchResult result =
        search(method.space, task, parts.train, search_options, &parts.valid);
    const std::vector<double> predictions = result.best.predict(parts.test);
    nlohmann::json entry;
    entry["method"] = method.name;
    entry["grid_size"] = result.grid_size;
    entry["evaluations"] = result.evaluations;
    entry["best_config"] = result.best.config().name();
    entry["cv_mean"] = result.leaderboard.front().mean;
    entry["cv_folds"] = result.leaderboard.front().fold_scores;
    std::vector<LeaderboardEntry> top(
        result.leaderboard.begin(),
        result.leaderboard.begin() +
            static_cast<std::ptrdiff_t>(std::min(kLeaderboardShown, result.leaderboard.size())));
    entry["leaderboard"] = leaderboard_to_json(top);
    if (kind == Task::kClassification) {
      std::vector<int> labels(truth.size());
      for (std::size_t i = 0; i < truth.size(); ++i) labels[i] = truth[i] >= 0.5 ? 1 : 0;
      entry["test"] = to_json(class_report(threshold_labels(predictions), labels));
    } else {
      entry["test"] = to_json(reg_report(predictions, truth));
    }
    methods.push_back(std::move(entry));
    if (method.name == "extended-space") extended_best = result.best;
  }
  report["methods"] = std::move(methods);

  nlohmann::json importance;
  importance["method"] = "extended-space";
  if (const TreeEnsemble* trees = extended_best->learner().trees()) {
    importance["gain"] = importance_json(feature_importance(*trees));
  } else {
    importance["gain"] = nlohmann::json::array();
  }
  importance["permutation"] = importance_json(
      permutation_importance(*extended_best, parts.test, space.metric_for(kind),
                             options.importance_repeats, derive_seed(pair_seed, "importance")));
  importance["repeats"] = options.importance_repeats;
  report["importance"] = std::move(importance);
  return report;
}

std::string render_report(const nlohmann::json& report) {
  std::ostringstream out;
  const bool classification = report.at("kind") == "classification";
  out << "Granularity: " << report.at("granularity").get<std::string>()
      << "   Task: " << report.at("task").get<std::string>() << " ("
      << report.at("label").get<std::string>() << ")\n";
  out << "Rows: train " << report["rows"]["train"] << ", valid " << report["rows"]["valid"]
      << ", test " << report["rows"]["test"] << "   Folds: " << report.at("k_folds")
      << "   Strategy: " << report.at("strategy").get<std::string>()
      << "   Selection metric: " << report.at("metric").get<std::string>() << "\n\n";

  out << "Held-out test split\n";
  if (classification) {
    out << pad("Method", 16) << pad("Class", 16) << pad("Precision", 11) << pad("Recall", 11)
        << pad("F1", 11) << "Support\n";
    for (const auto& m : report.at("methods")) {
      const auto& test = m.at("test");
      for (int c = 0; c < 2; ++c) {
        const auto& cls = test.at("classes").at(c);
        out << pad(c == 0 ? m.at("method").get<std::string>() : "", 16)
            << pad(report.at("classes").at(c).get<std::string>(), 16)
            << pad(fixed(cls.at("precision").get<double>()), 11)
            << pad(fixed(cls.at("recall").get<double>()), 11)
            << pad(fixed(cls.at("f1").get<double>()), 11) << cls.at("support") << "\n";
      }
      const auto& macro = test.at("macro");
      out << pad("", 16) << pad("macro avg", 16) << pad(fixed(macro.at("precision").get<double>()), 11)
          << pad(fixed(macro.at("recall").get<double>()), 11)
          << pad(fixed(macro.at("f1").get<double>()), 11) << test.at("n") << "\n";
    }
  } else {
    out << pad("Method", 16) << pad("MAE (weeks)", 13) << pad("R2", 11) << "Rows\n";
    for (const auto& m : report.at("methods")) {
      const auto& test = m.at("test");
      out << pad(m.at("method").get<std::string>(), 16) << pad(fixed(test.at("mae").get<double>()), 13)
          << pad(fixed(test.at("r2").get<double>()), 11) << test.at("n") << "\n";
    }
  }

  out << "\nCross-validation on the train split\n";
  out << pad("Method", 16) << pad("Configs", 9) << pad("CV mean", 11) << "Selected configuration\n";
  for (const auto& m : report.at("methods")) {
    out << pad(m.at("method").get<std::string>(), 16)
        << pad(std::to_string(m.at("evaluations").get<std::size_t>()), 9)
        << pad(fixed(m.at("cv_mean").get<double>()), 11) << m.at("best_config").get<std::string>()
        << "\n";
  }

  const auto& importance = report.at("importance");
  out << "\nFeature importance (" << importance.at("method").get<std::string>() << " pipeline)\n";
  out << pad("Rank", 6) << pad("Split gain", 44) << "Permutation (mean score drop)\n";
  const auto& gain = importance.at("gain");
  const auto& perm = importance.at("permutation");
  const std::size_t rows = std::max(gain.size(), perm.size());
  for (std::size_t i = 0; i < rows; ++i) {
    std::string g, p;
    if (i < gain.size()) {
      g = gain[i].at("feature").get<std::string>() + " " + fixed(gain[i].at("score").get<double>(), 2);
    }
    if (i < perm.size()) {
      p = perm[i].at("feature").get<std::string>() + " " + fixed(perm[i].at("score").get<double>());
    }
    out << pad(std::to_string(i + 1), 6) << pad(g, 44) << p << "\n";
  }
  if (gain.empty()) out << "(selected learner has no trees; split gain not available)\n";
  return out.str();
}

std::vector<std::string> cmd_experiment(const ExperimentOptions& options) {
  const ConfigSpace space = resolve_space(options.space_path, options.k_folds);
  const auto matrix = experiment_matrix(options);
  Manifest manifest("experiment",
                    {{"space_path", options.space_path.value_or("")},
                     {"space", space_to_json(space)},
                     {"data_dir", options.data_dir},
                     {"seed", options.seed},
                     {"strategy", std::string(to_string(options.strategy))},
                     {"budget", options.budget}});
  ensure_dir(options.out_dir);
  std::map<Granularity, Cohort> cache;
  std::vector<std::string> written;
  for (const auto& [granularity, task] : matrix) {
    auto it = cache.find(granularity);
    if (it == cache.end()) {
      it = cache.emplace(granularity, load_granularity(options.data_dir, granularity)).first;
    }
    const nlohmann::json report = run_experiment(it->second, granularity, task, space, options);
    const std::string stem = join_path(
        options.out_dir, std::string(to_string(granularity)) + "_" + std::string(to_string(task)));
    written.push_back(stem + ".json");
    write_text(written.back(), report.dump(2) + "\n");
    written.push_back(stem + ".txt");
    write_text(written.back(), render_report(report));
  }
  const std::string manifest_path = join_path(options.out_dir, kManifestJson);
  manifest.write(manifest_path, written);
  written.push_back(manifest_path);
  return written;
}

std::vector<std::string> cmd_train(const TrainOptions& options) {
  check_task_granularity(options.granularity, options.task);
  const ConfigSpace space = resolve_space(options.space_path, options.k_folds);
  Manifest manifest("train", {{"space_path", options.space_path.value_or("")},
                              {"data_dir", options.data_dir},
                              {"granularity", std::string(to_string(options.granularity))},
                              {"task", std::string(to_string(options.task))},
                              {"seed", options.seed},
                              {"strategy", std::string(to_string(options.strategy))},
                              {"budget", options.budget}});
  const Cohort labeled =
      labeled_subset(load_granularity(options.data_dir, options.granularity), options.task);
  check(!labeled.empty(), ErrorCode::kEmptyCohort, "no labeled records to train on");
  SplitPlan plan;
  plan.seed = derive_seed(options.seed, "split");
  const CohortSplit parts = split(labeled, plan);
  SearchOptions search_options;
  search_options.strategy = options.strategy;
  search_options.budget = options.budget;
  search_options.seed = derive_seed(options.seed, "search");
  const SearchResult result =
      search(space, options.task, parts.train, search_options, &parts.valid);
  const Metric metric = space.metric_for(task_for(options.task));
  const fs::path out_path(options.out_path);
  if (out_path.has_parent_path()) ensure_dir(out_path.parent_path().string());
  save_bundle(result.best, metric, options.out_path);

  nlohmann::json summary = {
      {"best_config", result.best.config().name()},
      {"cv_mean", result.leaderboard.front().mean},
      {"test_score", score(metric, result.best.predict(parts.test), label_vector(parts.test, options.task))},
      {"metric", std::string(to_string(metric))},
      {"leaderboard", leaderboard_to_json(result.leaderboard)}};
  const std::string summary_path = options.out_path + ".search.json";
  write_text(summary_path, summary.dump(2) + "\n");
  std::vector<std::string> written = {options.out_path, summary_path};
  const std::string manifest_path = options.out_path + ".manifest.json";
  manifest.write(manifest_path, written);
  written.push_back(manifest_path);
  return written;
}

std::vector<std::string> cmd_predict(const std::string& bundle_path, const std::string& input_csv,
                                     const std::string& out_csv) {
  Manifest manifest("predict", {{"bundle", bundle_path}, {"input", input_csv}});
  const FittedPipeline pipeline = load_bundle(bundle_path);
  const Schema& schema = pipeline.schema();

  std::ifstream in(input_csv);
  check(in.good(), ErrorCode::kIo, "cannot open '" + input_csv + "'");
  std::string line;
  check(csv::read_line(in, line), ErrorCode::kHeaderMismatch, "'" + input_csv + "' has no header");
  const std::vector<std::string> header = csv::split_line(line);

  const std::set<std::string> reserved = {
      std::string(kPatientIdColumn), std::string(kEpisodeNumberColumn),
      std::string(kAdmissionDateColumn), std::string(kRecurrenceColumn),
      std::string(kCategoryColumn), std::string(kWeeksColumn)};
  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < header.size(); ++i) position.emplace(header[i], i);
  std::vector<std::string> missing, extra;
  for (const auto& column : schema.columns) {
    if (!position.count(column.name)) missing.push_back(column.name);
  }
  for (const auto& name : header) {
    if (!schema.index_of(name) && !reserved.count(name)) extra.push_back(name);
  }
  if (!missing.empty() || !extra.empty()) {
    auto list = [](const std::vector<std::string>& names) {
      std::string s = "[";
      for (std::size_t i = 0; i < names.size(); ++i) s += (i ? ", " : "") + names[i];
      return s + "]";
    };
    fail(ErrorCode::kSchemaMismatch,
         "input columns differ from the bundle schema: missing columns " + list(missing) +
             "; extra columns " + list(extra));
  }

  Cohort cohort;
  cohort.schema = schema;
  std::vector<std::vector<std::string>> rows;
  std::size_t line_number = 1;
  while (csv::read_line(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::vector<std::string> fields = csv::split_line(line);
    check(fields.size() == header.size(), ErrorCode::kRowArity,
          "line " + std::to_string(line_number) + " has " + std::to_string(fields.size()) +
              " cells, expected " + std::to_string(header.size()));
    PatientRecord rec;
    if (auto it = position.find(std::string(kPatientIdColumn)); it != position.end()) {
      rec.patient_id = fields[it->second];
    }
    for (const auto& column : schema.columns) {
      rec.values.push_back(parse_cell(fields[position.at(column.name)], column.kind));
    }
    cohort.records.push_back(std::move(rec));
    rows.push_back(std::move(fields));
  }

  const std::vector<double> predictions =
      cohort.empty() ? std::vector<double>{} : pipeline.predict(cohort);
  std::ostringstream out;
  std::vector<std::string> out_header = header;
  out_header.insert(out_header.end(), {"risk_prob", "risk_class", "weeks_pred"});
  out << csv::join_line(out_header) << "\n";
  const bool classification = pipeline.task() == Task::kClassification;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<std::string> fields = rows[i];
    if (classification) {
      fields.push_back(csv::format_double(predictions[i]));
      fields.push_back(class_name(pipeline.target(), predictions[i] >= 0.5 ? 1 : 0));
      fields.emplace_back();
    } else {
      fields.emplace_back();
      fields.emplace_back();
      fields.push_back(csv::format_double(predictions[i]));
    }
    out << csv::join_line(fields) << "\n";
  }
  const fs::path out_path(out_csv);
  if (out_path.has_parent_path()) ensure_dir(out_path.parent_path().string());
  write_text(out_csv, out.str());
  std::vector<std::string> written = {out_csv};
  const std::string manifest_path = out_csv + ".manifest.json";
  manifest.write(manifest_path, written);
  written.push_back(manifest_path);
  return written;
}

std::vector<std::string> cmd_report(const std::string& dir) {
  Manifest manifest("report", {{"dir", dir}});
  std::vector<std::string> reports;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    const fs::path& p = entry.path();
    if (p.extension() != ".json" || p.filename() == kManifestJson) continue;
    reports.push_back(p.string());
  }
  check(!ec, ErrorCode::kIo, "cannot list '" + dir + "': " + ec.message());
  std::sort(reports.begin(), reports.end());
  std::string summary;
  for (const auto& path : reports) {
    const nlohmann::json doc = read_json(path);
    if (!doc.contains("methods") || !doc.contains("granularity")) continue;
    summary += "== " + fs::path(path).stem().string() + " ==\n" + render_report(doc) + "\n";
  }
  check(!summary.empty(), ErrorCode::kIo, "no experiment reports found in '" + dir + "'");
  const std::string summary_path = join_path(dir, "summary.txt");
  write_text(summary_path, summary);
  std::vector<std::string> written = {summary_path};
  const std::string manifest_path = join_path(dir, "summary.manifest.json");
  manifest.write(manifest_path, written);
  written.push_back(manifest_path);
  return written;
}

}  // namespace progpipe
