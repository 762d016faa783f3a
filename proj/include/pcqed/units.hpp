// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <numbers>

// Internal unit system: energies and hbar*rates in eV, lengths in nm, dipoles in
// Debye, times in hbar/eV (1 hbar/eV = 0.6582 fs).
namespace pcqed::units {

inline constexpr double pi = std::numbers::pi;

inline constexpr double hbar_c = 197.3269804;        // eV nm
inline constexpr double hbar_ev_s = 6.582119569e-16;  // eV s
inline constexpr double hbar_ev_fs = 0.6582119569;    // eV fs
inline constexpr double debye = 0.0208194;            // e nm
inline constexpr double coulomb = 1.4399645;          // e^2/(4 pi eps0), eV nm

/// d^2/(4 pi eps0) in eV nm^3 for a dipole given in Debye.
constexpr double dipole_energy_scale(double dipole_debye) {
  const double d = dipole_debye * debye;
  return d * d * coulomb;
}

constexpr double wavenumber(double hw_ev) { return hw_ev / hbar_c; }
constexpr double wavelength_to_energy(double lambda_nm) { return 2.0 * pi * hbar_c / lambda_nm; }
constexpr double energy_to_wavelength(double hw_ev) { return 2.0 * pi * hbar_c / hw_ev; }

constexpr double rate_to_per_second(double hgamma_ev) { return hgamma_ev / hbar_ev_s; }
constexpr double per_second_to_rate(double gamma_s) { return gamma_s * hbar_ev_s; }

constexpr double fs_to_internal(double t_fs) { return t_fs / hbar_ev_fs; }
constexpr double internal_to_fs(double t) { return t * hbar_ev_fs; }
constexpr double ns_to_internal(double t_ns) { return t_ns * 1.0e6 / hbar_ev_fs; }
constexpr double internal_to_ns(double t) { return t * hbar_ev_fs * 1.0e-6; }

}  // namespace pcqed::units
