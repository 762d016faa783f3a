// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <span>
#include <vector>

#include "pcqed/medium.hpp"

namespace pcqed {

inline constexpr int kDefaultMaxOrder = 30;

struct MieCoefficients {
  int n = 0;
  cplx a;
  cplx b;
  double hw = 0.0;
};

MieCoefficients mie_coefficients(int n, double hw, const Geometry& geometry,
                                 const Material& material);

/// Orders 1..nmax sharing one set of Bessel recurrences.
std::vector<MieCoefficients> mie_coefficients_upto(int nmax, double hw, const Geometry& geometry,
                                                   const Material& material);

/// Small-particle limit of B_n.
cplx mie_b_quasistatic(int n, double hw, const Geometry& geometry, const Material& material);

/// Radial-radial scattered Green tensor at the emitter, in 1/nm.
struct GreenSeries {
  cplx total;
  std::vector<cplx> terms;  // terms[n-1] is the order-n contribution
  bool converged = true;
};

GreenSeries green_rr_scattered(double hw, const Geometry& geometry, const Material& material,
                               int n_max = kDefaultMaxOrder);

/// Same series with caller-supplied B_1..B_N (b[n-1]).
GreenSeries green_rr_from_coefficients(double hw, const Geometry& geometry,
                                       std::span<const cplx> b);

/// Im G_0^rr(r, r) = k_b / (6 pi).
double green_rr_free_imag(double hw, const Geometry& geometry);

/// Share of the free-space radial rate carried by order n at x = k_b r_d.
double multipole_fraction(int n, double x);

struct RadialDecomposition {
  std::vector<double> rates;  // hbar*gamma_0n^rad in eV, rates[n-1]
  double total_free = 0.0;    // hbar*gamma_0^rad
  double captured_fraction = 0.0;
  bool truncated = false;     // captured_fraction < 0.999
};

RadialDecomposition gamma0n_radial_decomposition(double hw, const Geometry& geometry,
                                                 const Emitter& emitter,
                                                 int n_max = kDefaultMaxOrder);

struct Polarizability {
  cplx quasi_static;  // nm^(2n+1)
  cplx effective;
};

Polarizability qs_polarizability(int n, double hw, const Geometry& geometry,
                                 const Material& material, bool radiation_correction = true);

/// Root of Re(n eps_m + (n+1) eps_b) by bisection. Drude search range is
/// (0.1 eV, hw_p); tabulated materials use the table range.
double qs_resonance(int n, const Geometry& geometry, const Material& material);

struct QuasiStaticMode {
  int n = 0;
  double hw_n = 0.0;        // eV
  double hgamma_rad = 0.0;  // eV
  double hgamma = 0.0;      // eV
  double hg = 0.0;          // eV
  double weight = 1.0;      // pole residue (2n+1) eps_b / (n eps_inf + (n+1) eps_b)
};

/// Drude-only closed forms for a single multipole resonance.
QuasiStaticMode qs_mode_params(int n, const Geometry& geometry, const Material& material,
                               const Emitter& emitter);

/// Sum of first-order resonances built from precomputed modes.
cplx green_rr_first_order(double hw, std::span<const QuasiStaticMode> modes,
                          const Emitter& emitter);

cplx green_rr_quasistatic(double hw, const Geometry& geometry, const Material& material,
                          const Emitter& emitter, int n_max = kDefaultMaxOrder);

}  // namespace pcqed
