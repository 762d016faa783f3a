// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "app/output.hpp"
#include "app/scenario.hpp"
#include "json.hpp"

namespace pcqed::app {

/// A library error tagged with the pipeline stage that raised it.
class TaskFailure : public std::runtime_error {
 public:
  TaskFailure(std::string module, std::string op, const std::string& what)
      : std::runtime_error(module + "::" + op + ": " + what),
        module(std::move(module)),
        op(std::move(op)) {}

  std::string module;
  std::string op;
};

/// Runs the scenario's task, writing its files into `out`. Returns the task summary that goes
/// into the manifest.
nlohmann::json run_task(const Scenario& scenario, OutputSet& out);

/// Figure data set: fig2..fig9 CSVs plus summary.json.
nlohmann::json run_figure_suite(const Scenario& scenario, OutputSet& out);

struct RunOptions {
  std::filesystem::path out_dir;  // empty: scenario.output_dir
  int threads = -1;               // < 0: scenario.threads
  bool verify = false;
};

/// Full run with manifest and staging. Exit codes: 0 success, 2 schema error, 3 numerical
/// failure (including a failed --verify), 1 anything else.
int run_scenario(const std::filesystem::path& config, const RunOptions& options,
                 std::ostream& log);

}  // namespace pcqed::app
