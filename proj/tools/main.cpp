// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "CLI11.hpp"
#include "app/output.hpp"
#include "app/tasks.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Emitter coupled to the plasmon modes of a metal sphere"};
  app.require_subcommand(1);

  std::string config;
  pcqed::app::RunOptions options;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "Run the scenario described by a JSON config");
  run->add_option("config", config, "Scenario file")->required();
  run->add_option("--out", out_dir, "Output directory (overrides run.output_dir)");
  run->add_option("--threads", options.threads, "Worker threads (0: hardware)")
      ->check(CLI::NonNegativeNumber);
  run->add_flag("--verify", options.verify, "Also run the oracle and property checks");

  std::string manifest_dir;
  auto* check = app.add_subcommand("check-manifest", "Recompute the checksums of a run directory");
  check->add_option("dir", manifest_dir, "Run output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*run) {
    options.out_dir = out_dir;
    return pcqed::app::run_scenario(config, options, std::cerr);
  }
  try {
    const auto bad = pcqed::app::check_manifest(manifest_dir);
    for (const auto& name : bad) std::cerr << "mismatch: " << name << "\n";
    if (bad.empty()) std::cout << "ok\n";
    return bad.empty() ? 0 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
