// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "app/scenario.hpp"
#include "json.hpp"

namespace pcqed::app {

/// One oracle comparison: `value` is the worst deviation seen, `pass` means value <= tolerance
/// (or value >= tolerance for lower bounds such as positivity).
struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

nlohmann::json to_json(const Check& c);

// Property checks on random draws. Each returns one Check per invariant.

/// Lindblad (three kinds) against the effective Hamiltonian in the single-excitation sector:
/// population deviation, trace, positivity and hermiticity, N <= 5.
std::vector<Check> lindblad_equivalence(int draws, std::uint64_t seed);

/// Biorthogonality and arrowhead secular residual of random standard and Fano Hamiltonians.
std::vector<Check> eigensystem_properties(int draws, std::uint64_t seed);

/// Sign flips of g_n leave eigenvalues, |C(t)|^2, P(w) and P_rad(w) unchanged.
Check gauge_invariance(int draws, std::uint64_t seed);

/// Every Fano object at alpha = 0 equals its standard counterpart exactly.
Check fano_reduction(int draws, std::uint64_t seed);

/// Noiseless synthetic spectra recovered to relative 1e-6.
Check lorentzian_round_trip(int draws, std::uint64_t seed);
Check fano_round_trip(int draws, std::uint64_t seed);

/// Oracles tied to the scenario's geometry and material plus the generic property suites.
std::vector<Check> run_verification(const Scenario& scenario);

}  // namespace pcqed::app
