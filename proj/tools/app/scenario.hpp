// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pcqed/lindblad.hpp"
#include "pcqed/medium.hpp"

namespace pcqed::app {

enum class Task { spectra, fit, dressed, dynamics, rates, fano, lindblad, figure_suite };

const char* to_string(Task task);

struct MaterialSpec {
  std::string model = "drude";  // drude | tabulated
  DrudeParams drude{6.0, 7.90, 0.051};
  std::filesystem::path table;  // resolved against the config directory
};

struct EmitterSpec {
  double hw0 = 0.0;  // eV (from hw0 or lambda)
  std::optional<double> tau0_ns;
  std::optional<double> eta;
  std::optional<double> dipole;     // Debye
  double hgamma0_nr = 0.0;          // eV, with the dipole form
};

struct GridSpec {
  double min = 0.0;
  double max = 0.0;
  int points = 0;
};

struct TimeSpec {
  double max = 0.0;  // hbar/eV; 0 means "pick from the expected decay"
  int points = 201;
};

struct FanoSpec {
  std::vector<int> orders{1};
  bool lossy = true;
};

struct FigureSuiteSpec {
  double fig2_radius = 8.0;  // nm, assumed
};

struct Scenario {
  MaterialSpec material;
  Geometry geometry;
  EmitterSpec emitter;
  Task task = Task::fit;
  int modes = 6;
  GridSpec grid{2.0, 3.6, 1601};
  TimeSpec time;
  std::filesystem::path output_dir = "out";
  int threads = 0;
  MasterKind lindblad_kind = MasterKind::standard;
  FanoSpec fano;
  FigureSuiteSpec figures;

  nlohmann::json source;  // the validated input, echoed in the manifest

  Material make_material() const;
  Emitter make_emitter() const;
  std::vector<double> grid_points() const;
};

/// Strict parse: unknown keys, wrong types and out-of-range values throw SchemaError with the
/// dotted field path. Relative paths are resolved against `base_dir`.
Scenario parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

Scenario load_scenario(const std::filesystem::path& path);

}  // namespace pcqed::app
