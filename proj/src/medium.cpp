// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#include "pcqed/medium.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "pcqed/errors.hpp"
#include "pcqed/units.hpp"

namespace pcqed {

Material Material::drude(double eps_inf, double hw_p, double hgamma_p) {
  if (!(hw_p > 0.0)) throw InvalidArgument("Drude plasma energy must be positive");
  if (!(hgamma_p >= 0.0)) throw InvalidArgument("Drude damping must be non-negative");
  Material m;
  m.drude_ = {eps_inf, hw_p, hgamma_p};
  return m;
}

Material Material::tabulated(std::vector<PermittivitySample> table) {
  if (table.size() < 2) throw InvalidArgument("permittivity table needs at least 2 rows");
  for (std::size_t i = 1; i < table.size(); ++i) {
    if (!(table[i].hw > table[i - 1].hw)) {
      throw InvalidArgument("permittivity table energies must be strictly increasing");
    }
  }
  for (const auto& s : table) {
    if (s.eps.imag() < 0.0) throw InvalidArgument("permittivity table has Im eps < 0");
  }
  Material m;
  m.table_ = std::move(table);
  return m;
}

const DrudeParams& Material::drude_params() const {
  if (table_) throw InvalidArgument("material is tabulated, not Drude");
  return drude_;
}

const std::vector<PermittivitySample>& Material::table() const {
  if (!table_) throw InvalidArgument("material is Drude, not tabulated");
  return *table_;
}

cplx Material::permittivity(double hw) const {
  if (!(hw > 0.0)) throw InvalidArgument("photon energy must be positive");
  if (!table_) {
    const auto& d = drude_;
    return d.eps_inf - d.hw_p * d.hw_p / cplx(hw * hw, d.hgamma_p * hw);
  }
  const auto& t = *table_;
  if (hw < t.front().hw || hw > t.back().hw) {
    throw RangeError("energy " + std::to_string(hw) + " eV outside permittivity table [" +
                     std::to_string(t.front().hw) + ", " + std::to_string(t.back().hw) + "]");
  }
  auto hi = std::upper_bound(t.begin(), t.end(), hw,
                             [](double x, const PermittivitySample& s) { return x < s.hw; });
  if (hi == t.end()) return t.back().eps;
  auto lo = hi - 1;
  const double f = (hw - lo->hw) / (hi->hw - lo->hw);
  return {lo->eps.real() + f * (hi->eps.real() - lo->eps.real()),
          lo->eps.imag() + f * (hi->eps.imag() - lo->eps.imag())};
}

cplx permittivity(const Material& material, double hw) { return material.permittivity(hw); }

Material read_permittivity_table(std::istream& in) {
  std::vector<PermittivitySample> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    double hw = 0.0, re = 0.0, im = 0.0;
    if (!(ss >> hw >> re >> im)) {
      throw InvalidArgument("permittivity table line " + std::to_string(lineno) +
                            ": expected 3 numeric columns");
    }
    rows.push_back({hw, {re, im}});
  }
  return Material::tabulated(std::move(rows));
}

Material read_permittivity_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open permittivity table " + path.string());
  return read_permittivity_table(in);
}

double Geometry::index() const { return std::sqrt(eps_b); }

void Geometry::validate() const {
  if (!(radius > 0.0)) throw InvalidArgument("sphere radius must be positive");
  if (!(eps_b >= 1.0)) throw InvalidArgument("background permittivity must be >= 1");
  if (!(distance > radius)) throw InvalidArgument("emitter must lie outside the sphere");
}

Wavenumbers wavenumbers(const Geometry& geometry, const Material& material, double hw) {
  const double k0 = units::wavenumber(hw);
  cplx km = std::sqrt(material.permittivity(hw)) * k0;
  if (km.imag() < 0.0) km = -km;
  return {k0, geometry.index() * k0, km};
}

double radiative_rate(double dipole_debye, double hw, double refractive_index) {
  const double k0 = units::wavenumber(hw);
  return 4.0 / 3.0 * refractive_index * k0 * k0 * k0 * units::dipole_energy_scale(dipole_debye);
}

double dipole_for_radiative_rate(double hgamma_rad, double hw, double refractive_index) {
  const double unit = radiative_rate(1.0, hw, refractive_index);
  return std::sqrt(hgamma_rad / unit);
}

Emitter Emitter::from_lifetime(double hw0, double tau0_ns, double eta, const Geometry& geometry) {
  if (!(hw0 > 0.0)) throw InvalidArgument("emitter energy must be positive");
  if (!(tau0_ns > 0.0)) throw InvalidArgument("emitter lifetime must be positive");
  if (!(eta > 0.0 && eta <= 1.0)) throw InvalidArgument("quantum yield must lie in (0, 1]");
  Emitter e;
  e.hw0 = hw0;
  e.quantum_yield = eta;
  e.refractive_index = geometry.index();
  e.hgamma0 = units::hbar_ev_s / (tau0_ns * 1e-9);
  e.dipole = dipole_for_radiative_rate(eta * e.hgamma0, hw0, e.refractive_index);
  return e;
}

Emitter Emitter::from_dipole(double hw0, double dipole_debye, double hgamma0_nr,
                             const Geometry& geometry) {
  if (!(hw0 > 0.0)) throw InvalidArgument("emitter energy must be positive");
  if (!(dipole_debye >= 0.0)) throw InvalidArgument("dipole must be non-negative");
  if (!(hgamma0_nr >= 0.0)) throw InvalidArgument("non-radiative rate must be non-negative");
  Emitter e;
  e.hw0 = hw0;
  e.dipole = dipole_debye;
  e.refractive_index = geometry.index();
  const double rad = radiative_rate(dipole_debye, hw0, e.refractive_index);
  e.hgamma0 = rad + hgamma0_nr;
  e.quantum_yield = e.hgamma0 > 0.0 ? rad / e.hgamma0 : 1.0;
  return e;
}

Emitter Emitter::from_dipole_total(double hw0, double dipole_debye, double hgamma0,
                                   const Geometry& geometry) {
  const double rad = radiative_rate(dipole_debye, hw0, geometry.index());
  if (hgamma0 < rad) {
    throw InvalidArgument("total emitter rate is below its radiative rate");
  }
  return from_dipole(hw0, dipole_debye, hgamma0 - rad, geometry);
}

Emitter Emitter::at_energy(double hw) const {
  Emitter e = *this;
  const double s = hw / hw0;
  e.hw0 = hw;
  e.hgamma0 = hgamma0 * s * s * s;
  return e;
}

FreeSpaceRates free_space_rates(const Emitter& emitter, const Geometry& geometry) {
  FreeSpaceRates r;
  r.radiative = radiative_rate(emitter.dipole, emitter.hw0, geometry.index());
  r.total = emitter.quantum_yield > 0.0 ? r.radiative / emitter.quantum_yield : 0.0;
  if (emitter.dipole == 0.0) r.total = emitter.hgamma0;
  r.nonradiative = r.total - r.radiative;
  r.radiative_per_s = units::rate_to_per_second(r.radiative);
  r.total_per_s = units::rate_to_per_second(r.total);
  r.nonradiative_per_s = units::rate_to_per_second(r.nonradiative);
  return r;
}

}  // namespace pcqed
