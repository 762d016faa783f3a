// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

namespace pcqed {

using cplx = std::complex<double>;

struct DrudeParams {
  double eps_inf = 1.0;
  double hw_p = 0.0;      // eV
  double hgamma_p = 0.0;  // eV
};

struct PermittivitySample {
  double hw;  // eV
  cplx eps;
};

/// Metal permittivity: Drude model or a tabulated (hw, Re eps, Im eps) grid.
class Material {
 public:
  static Material drude(double eps_inf, double hw_p, double hgamma_p);
  static Material tabulated(std::vector<PermittivitySample> table);

  /// Silver as used throughout: eps_inf = 6, hw_p = 7.90 eV, hgamma_p = 51 meV.
  static Material silver_drude(double hgamma_p = 0.051) { return drude(6.0, 7.90, hgamma_p); }

  cplx permittivity(double hw) const;

  bool is_drude() const { return !table_; }
  const DrudeParams& drude_params() const;
  const std::vector<PermittivitySample>& table() const;

 private:
  Material() = default;

  DrudeParams drude_{};
  std::optional<std::vector<PermittivitySample>> table_;
};

cplx permittivity(const Material& material, double hw);

/// 3-column text (hw eV, Re eps, Im eps); '#' starts a comment line.
Material read_permittivity_table(std::istream& in);
Material read_permittivity_table(const std::filesystem::path& path);

/// Sphere of radius R in a background eps_b, emitter at distance r_d from the center.
struct Geometry {
  double radius = 1.0;    // nm
  double eps_b = 1.0;
  double distance = 2.0;  // nm, from sphere center

  static Geometry from_gap(double radius, double eps_b, double gap) {
    return {radius, eps_b, radius + gap};
  }

  double gap() const { return distance - radius; }
  double index() const;
  void validate() const;
};

struct Wavenumbers {
  double k0;  // 1/nm
  double kb;  // 1/nm
  cplx km;    // 1/nm, Im km >= 0
};

Wavenumbers wavenumbers(const Geometry& geometry, const Material& material, double hw);

/// Radial two-level emitter. Rates are stored as hbar*gamma in eV.
///
/// The radiative part always satisfies the homogeneous-medium formula for the
/// stored dipole at the stored transition energy; the factories differ only
/// in which quantities are taken as primary inputs.
struct Emitter {
  double hw0 = 0.0;             // eV
  double dipole = 0.0;          // Debye
  double quantum_yield = 1.0;   // gamma0_rad / gamma0
  double hgamma0 = 0.0;         // eV, total intrinsic decay
  double refractive_index = 1.0;

  /// (tau0, eta) primary; the dipole is the one implied by the radiative rate eta/tau0.
  static Emitter from_lifetime(double hw0, double tau0_ns, double eta, const Geometry& geometry);
  /// Dipole and intrinsic non-radiative rate primary.
  static Emitter from_dipole(double hw0, double dipole_debye, double hgamma0_nr,
                             const Geometry& geometry);
  /// Dipole and total intrinsic rate primary (hgamma0 >= radiative rate).
  static Emitter from_dipole_total(double hw0, double dipole_debye, double hgamma0,
                                   const Geometry& geometry);

  double hgamma0_rad() const { return quantum_yield * hgamma0; }
  double hgamma0_nr() const { return hgamma0 - hgamma0_rad(); }

  /// Same dipole and yield at another transition energy (radiative rate ~ w^3).
  Emitter at_energy(double hw) const;
};

/// hbar*gamma0_rad = (4/3) n_b k0^3 d^2/(4 pi eps0), in eV.
double radiative_rate(double dipole_debye, double hw, double refractive_index);

/// Dipole (Debye) for which radiative_rate(...) == hgamma_rad.
double dipole_for_radiative_rate(double hgamma_rad, double hw, double refractive_index);

struct FreeSpaceRates {
  double radiative;     // eV
  double total;         // eV
  double nonradiative;  // eV
  double radiative_per_s;
  double total_per_s;
  double nonradiative_per_s;
};

FreeSpaceRates free_space_rates(const Emitter& emitter, const Geometry& geometry);

}  // namespace pcqed
