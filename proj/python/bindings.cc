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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "progpipe/error.h"
#include "progpipe/experiment.h"
#include "progpipe/metrics.h"

namespace py = pybind11;

namespace {

py::dict class_report_dict(const std::vector<int>& pred, const std::vector<int>& truth) {
  const progpipe::ClassReport r = progpipe::class_report(pred, truth);
  py::dict out;
  for (int c = 0; c < 2; ++c) {
    py::dict m;
    m["precision"] = r.per_class[c].precision;
    m["recall"] = r.per_class[c].recall;
    m["f1"] = r.per_class[c].f1;
    m["support"] = r.per_class[c].support;
    out[py::int_(c)] = m;
  }
  out["macro_precision"] = r.macro_precision;
  out["macro_recall"] = r.macro_recall;
  out["macro_f1"] = r.macro_f1;
  out["confusion"] = r.confusion;
  out["n"] = r.n;
  return out;
}

py::dict reg_report_dict(const std::vector<double>& pred, const std::vector<double>& truth) {
  const progpipe::RegReport r = progpipe::reg_report(pred, truth);
  py::dict out;
  out["mae"] = r.mae;
  out["r2"] = r.r2;
  out["n"] = r.n;
  return out;
}

std::vector<std::string> experiment(const std::string& data_dir, const std::string& out_dir,
                                    std::optional<std::string> space,
                                    std::uint64_t seed, const std::string& strategy,
                                    std::size_t budget, std::optional<int> k_folds,
                                    std::optional<std::string> granularity,
                                    std::optional<std::string> task) {
  progpipe::ExperimentOptions options;
  options.space_path = std::move(space);
  options.data_dir = data_dir;
  options.out_dir = out_dir;
  options.seed = seed;
  options.strategy = progpipe::parse_strategy(strategy);
  options.budget = budget;
  options.k_folds = k_folds;
  if (granularity) options.granularity = progpipe::parse_granularity(*granularity);
  if (task) options.task = progpipe::parse_target(*task);
  py::gil_scoped_release release;
  return progpipe::cmd_experiment(options);
}

std::vector<std::string> train(const std::string& data_dir, const std::string& out,
                               std::optional<std::string> space, std::uint64_t seed,
                               const std::string& strategy, std::size_t budget,
                               std::optional<int> k_folds, const std::string& granularity,
                               const std::string& task) {
  progpipe::TrainOptions options;
  options.space_path = std::move(space);
  options.data_dir = data_dir;
  options.out_path = out;
  options.seed = seed;
  options.strategy = progpipe::parse_strategy(strategy);
  options.budget = budget;
  options.k_folds = k_folds;
  options.granularity = progpipe::parse_granularity(granularity);
  options.task = progpipe::parse_target(task);
  py::gil_scoped_release release;
  return progpipe::cmd_train(options);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Pipeline search for readmission and wound-recurrence prediction";
  m.attr("__version__") = PROGPIPE_VERSION;

  // Errors surface as ProgpipeError with a `code` attribute naming the
  // failure kind.
  static py::exception<progpipe::Error> error(m, "ProgpipeError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const progpipe::Error& e) {
      py::object instance = py::handle(error.ptr())(py::str(e.what()));
      instance.attr("code") = std::string(progpipe::error_code_name(e.code()));
      PyErr_SetObject(error.ptr(), instance.ptr());
    }
  });

  m.def(
      "synthgen",
      [](const std::string& out_dir, std::optional<std::string> spec,
         std::optional<std::uint64_t> seed) {
        py::gil_scoped_release release;
        return progpipe::cmd_synthgen({std::move(spec), out_dir, seed});
      },
      py::arg("out_dir"), py::arg("spec") = py::none(), py::arg("seed") = py::none(),
      "Write synthetic cohorts and schemas; returns the written paths.");
  m.def("experiment", &experiment, py::arg("data_dir"), py::arg("out_dir"),
        py::arg("space") = py::none(), py::arg("seed") = 0, py::arg("strategy") = "exhaustive",
        py::arg("budget") = 0, py::arg("k_folds") = py::none(),
        py::arg("granularity") = py::none(), py::arg("task") = py::none(),
        "Run the method comparison and write reports; returns the written paths.");
  m.def("train", &train, py::arg("data_dir"), py::arg("out"), py::arg("space") = py::none(),
        py::arg("seed") = 0, py::arg("strategy") = "exhaustive", py::arg("budget") = 0,
        py::arg("k_folds") = py::none(), py::arg("granularity") = "wound",
        py::arg("task") = "category", "Search and write a pipeline bundle.");
  m.def(
      "predict",
      [](const std::string& bundle, const std::string& input, const std::string& out) {
        py::gil_scoped_release release;
        return progpipe::cmd_predict(bundle, input, out);
      },
      py::arg("bundle"), py::arg("input"), py::arg("out"),
      "Score a CSV with a pipeline bundle.");
  m.def(
      "report",
      [](const std::string& dir) {
        py::gil_scoped_release release;
        return progpipe::cmd_report(dir);
      },
      py::arg("dir"), "Render the reports in a directory into summary.txt.");
  m.def("class_report", &class_report_dict, py::arg("pred"), py::arg("truth"));
  m.def("reg_report", &reg_report_dict, py::arg("pred"), py::arg("truth"));
}
