// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

#include "pcqed/coupling.hpp"
#include "pcqed/medium.hpp"

namespace pcqed {

enum class RateMethod { adiabatic, fermi, broadened, fano, dynamics };

const char* to_string(RateMethod method);

/// Weak-coupling observables. Energies and hbar*rates in eV.
struct WeakCouplingReport {
  RateMethod method = RateMethod::adiabatic;
  double hw0 = 0.0;
  double hgamma0 = 0.0;
  double lamb_shift = 0.0;  // never folded back into hw0
  double hgamma_tot = 0.0;
  std::vector<int> n;
  std::vector<double> hgamma_n;

  double ratio() const { return hgamma_tot / hgamma0; }
  double lifetime_ns() const;
};

/// Lamb shift and decay rate from adiabatic elimination of the plasmon amplitudes.
WeakCouplingReport adiabatic_rates(std::span<const ModeParams> modes, const Emitter& emitter);

struct PurcellEntry {
  int n = 0;
  double purcell = 0.0;       // 4 g^2 / (gamma0 Gamma)
  double quality = 0.0;       // w_n / Gamma
  double contribution = 0.0;  // detuned gamma_n / gamma0
  bool radiative_resolved = false;
  double purcell_rad = 0.0;   // 4 g^2 / (gamma0^rad(w_n) Gamma^rad)
  double purcell_lossy = 0.0; // (Gamma^rad / Gamma) purcell_rad
};

std::vector<PurcellEntry> purcell_factors(std::span<const ModeParams> modes,
                                          const Emitter& emitter, double refractive_index = 1.0);

struct FermiRate {
  double ratio = 1.0;  // gamma_tot / gamma0
  bool converged = true;
};

/// 1 + eta (6 pi / k_b) Im G_scat^rr(r_d, r_d) at the emitter energy.
FermiRate fermi_rate(const Geometry& geometry, const Material& material, const Emitter& emitter,
                     int n_max);

/// Emitter and mode Lorentzians convolved: g^2 (gamma0 + Gamma) / (Delta^2 + ((gamma0+Gamma)/2)^2).
WeakCouplingReport broadened_rates(std::span<const ModeParams> modes, const Emitter& emitter);

/// Adiabatic elimination of the Fano Hamiltonian: mode couplings g(1 - i alpha/2).
WeakCouplingReport fano_adiabatic(std::span<const ModeParams> modes, const Emitter& emitter);

/// Emitter energy where the Fano bracket 1 - alpha^2/4 + 2 alpha Q x vanishes (x = (w0-w_n)/w_n).
double fano_dip_energy(const ModeParams& mode);

/// Decay constant of a sampled population by least squares on log p (times in hbar/eV).
double fit_decay_rate(std::span<const double> times, std::span<const double> population);

/// Report rows as (key, value) pairs for CSV export.
std::vector<std::pair<std::string, double>> flatten(const WeakCouplingReport& report);

}  // namespace pcqed
