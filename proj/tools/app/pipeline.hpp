// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "app/output.hpp"
#include "app/scenario.hpp"
#include "app/tasks.hpp"
#include "json.hpp"
#include "pcqed/coupling.hpp"
#include "pcqed/errors.hpp"

namespace pcqed::app {

/// Runs f, re-throwing library errors as TaskFailure(module, op).
template <class F>
auto stage(const char* module, const char* op, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SchemaError&) {
    throw;
  } catch (const pcqed::Error& e) {
    throw TaskFailure(module, op, e.what());
  }
}

/// Lorentzian modes 1..N of the scenario on its grid.
std::vector<ModeParams> extract(const Scenario& s, const Emitter& e);

Table modes_table(const std::vector<ModeParams>& modes, const Emitter& e);
nlohmann::json modes_json(const std::vector<ModeParams>& modes);

/// Positions (ascending) of the two highest local maxima.
std::vector<double> two_highest_peaks(std::span<const double> x, std::span<const double> y);

/// Emitter decay constant (eV) from a log-linear fit of |C_e(t)|^2 over 20 samples spread
/// across two adiabatic lifetimes.
double dynamics_decay_rate(const std::vector<ModeParams>& modes, const Emitter& e);

struct FanoOrder {
  Spectrum lossless_rate;
  FanoFit lossless;
  Spectrum lossy_rate;
  std::optional<FanoFit> lossy;
};

/// Lossless fit on the Drude metal with Gamma_p = 0, then (if requested and the metal is lossy)
/// the lossy fit with the radiative parameters frozen.
FanoOrder fano_order(int n, std::span<const double> grid, const Geometry& geometry,
                     const Material& material, const Emitter& emitter, bool lossy);

nlohmann::json fano_json(const FanoFit& fit);
std::vector<double> model_curve(std::span<const double> grid, const FanoModelContext& ctx,
                                const FanoFit& fit);

}  // namespace pcqed::app
