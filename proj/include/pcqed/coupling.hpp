// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "pcqed/medium.hpp"

namespace pcqed {

/// Sampled real function of photon energy.
struct Spectrum {
  std::vector<double> hw;  // eV, strictly ascending
  std::vector<double> values;

  std::size_t size() const { return hw.size(); }
  void validate() const;
};

/// hbar |kappa_{w,n}|^2 in eV (hbar^2 g^2 per unit hbar*omega) for one mode order.
struct CouplingSpectrum {
  int n = 0;
  Spectrum data;
};

/// Per-mode effective parameters. Energies and rates are hbar*value in eV.
struct ModeParams {
  int n = 0;
  double hw_n = 0.0;
  double hgamma = 0.0;
  double hgamma_rad = 0.0;
  double hgamma_nr = 0.0;
  double hg = 0.0;           // >= 0
  double fano_ratio = 0.0;   // alpha_n, signed
  double hgamma0n_rad = 0.0; // emitter decay into the order-n radiation channel at hw_n
  double detuning = 0.0;     // hw_n - hw0
  double fit_residual = 0.0; // RMS / max of the fitted data
  bool radiative_resolved = false;
  bool fano_resolved = false;

  double fano_parameter() const { return 2.0 / fano_ratio; }
};

std::vector<double> linspace(double lo, double hi, std::size_t points);

/// Both spectra use the per-order terms of the exact scattered Green tensor.
CouplingSpectrum kappa_spectrum(int n, std::span<const double> grid, const Geometry& geometry,
                                const Material& material, const Emitter& emitter);

/// Orders 1..nmax from one Mie evaluation per grid point.
std::vector<CouplingSpectrum> kappa_spectra(int nmax, std::span<const double> grid,
                                            const Geometry& geometry, const Material& material,
                                            const Emitter& emitter);

/// (Gamma/2pi) g^2 / ((w - w_n)^2 + Gamma^2/4).
double lorentzian_kappa(double hw, double hw_n, double hgamma, double hg);

struct LorentzianGuess {
  double hw_n;
  double hgamma;
  double hg;
};

/// Peak position, interpolated FWHM and the peak-height coupling.
LorentzianGuess lorentzian_initial_guess(const Spectrum& s);

ModeParams fit_lorentzian(const CouplingSpectrum& spectrum);

/// Fits every order on a window hw_n(qs) +- 5 Gamma_n(qs) of the grid; detunings are
/// taken against emitter.hw0. Fit failures are collected and rethrown as one FitFailure.
std::vector<ModeParams> extract_modes(int N, std::span<const double> grid,
                                      const Geometry& geometry, const Material& material,
                                      const Emitter& emitter);

/// gamma_n(w0)/gamma_0(w0) from the order-n scattered Green term (Fermi golden rule with the
/// emitter's yield). The emitter dipole is irrelevant here.
Spectrum fermi_rate_spectrum(int n, std::span<const double> grid, const Geometry& geometry,
                             const Material& material, double quantum_yield = 1.0);

/// Everything the Fano rate model needs besides the fit parameters.
struct FanoModelContext {
  int n = 1;
  Geometry geometry;
  Emitter emitter;  // dipole, yield and refractive index; hw0 is ignored

  /// hbar*gamma_0 at transition energy hw (total, ~ w^3).
  double hgamma0(double hw) const;
  /// hbar*gamma_0n^rad at hw.
  double hgamma0n_rad(double hw) const;
};

/// gamma_n/gamma_0 = F [1 - a^2/4 + 2 a Q x] / (1 + 4 Q^2 x^2), x = (w0 - w_n)/w_n,
/// F = 4 g^2/(gamma_0(w0) Gamma), Q = w_n/Gamma, a g = sqrt(gamma_0n^rad(w_n) Gamma^rad).
/// hg is signed here: its sign fixes the sign of a.
double fano_rate_model(double hw, const FanoModelContext& ctx, double hw_n, double hgamma_rad,
                       double hgamma_nr, double hg);

struct FanoFitOptions {
  bool lossy = false;
  /// Lossy mode only: keep hw_n, Gamma^rad and g at the values in `frozen`.
  bool freeze_radiative = true;
  const ModeParams* frozen = nullptr;
};

struct FanoFit {
  ModeParams mode;
  double signed_hg = 0.0;
  double q_factor = 0.0;       // Fano parameter 2/alpha
  double purcell_rad = 0.0;    // 4 g^2 / (gamma_0^rad Gamma^rad) at hw_n
  double purcell = 0.0;        // 4 g^2 / (gamma_0^rad Gamma) = (Gamma^rad/Gamma) F_rad
  double rms = 0.0;            // absolute RMS of the fit
};

FanoFit fit_fano_rate(const Spectrum& rate, const FanoModelContext& ctx,
                      const FanoFitOptions& options = {});

/// Relative RMS of the model with given parameters against data (same normalization as fits).
double fano_residual(const Spectrum& rate, const FanoModelContext& ctx, const ModeParams& mode);

/// g_n carrying the sign of alpha_n; equals hg whenever alpha_n >= 0.
double signed_coupling(const ModeParams& mode);

/// Copies of Fano-resolved modes with gamma_0n^rad and alpha_n re-evaluated at the
/// emitter's transition energy (the sign of alpha is kept).
std::vector<ModeParams> fano_at_emitter(std::span<const ModeParams> modes,
                                        const Geometry& geometry, const Emitter& emitter);

void write_spectrum(std::ostream& out, const Spectrum& s, const char* value_header);
Spectrum read_spectrum(std::istream& in);

}  // namespace pcqed
