// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#include "pcqed/mie.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pcqed/errors.hpp"
#include "pcqed/specfun.hpp"
#include "pcqed/units.hpp"

namespace pcqed {

namespace {

using specfun::double_factorial;

void check_order(int n) {
  if (n < 1) throw InvalidArgument("multipole order must be >= 1, got " + std::to_string(n));
  if (n > specfun::kMaxOrder) throw UnsupportedOrder("multipole order above 200");
}

// 1 / ((2n-1)!! (2n+1)!!)
double radiation_denominator(int n) {
  return 1.0 / (double_factorial(2 * n - 1) * double_factorial(2 * n + 1));
}

}  // namespace

std::vector<MieCoefficients> mie_coefficients_upto(int nmax, double hw, const Geometry& geometry,
                                                   const Material& material) {
  check_order(nmax);
  geometry.validate();
  const auto k = wavenumbers(geometry, material, hw);
  const cplx kb(k.kb, 0.0);
  const cplx xb = kb * geometry.radius;
  const cplx xm = k.km * geometry.radius;
  const cplx kb2 = kb * kb;
  const cplx km2 = k.km * k.km;

  const auto jb = specfun::spherical_bessel_j_sequence(nmax, xb);
  const auto jm = specfun::spherical_bessel_j_sequence(nmax, xm);
  const auto hb = specfun::spherical_hankel1_sequence(nmax, xb);

  std::vector<MieCoefficients> out;
  out.reserve(nmax);
  for (int n = 1; n <= nmax; ++n) {
    const cplx dpsi_b = xb * jb[n - 1] - double(n) * jb[n];
    const cplx dpsi_m = xm * jm[n - 1] - double(n) * jm[n];
    const cplx dzeta_b = xb * hb[n - 1] - double(n) * hb[n];
    const cplx a = (jm[n] * dpsi_b - jb[n] * dpsi_m) / (hb[n] * dpsi_m - jm[n] * dzeta_b);
    const cplx b = (kb2 * jb[n] * dpsi_m - km2 * jm[n] * dpsi_b) /
                   (km2 * jm[n] * dzeta_b - kb2 * hb[n] * dpsi_m);
    if (std::isfinite(a.real()) && std::isfinite(a.imag()) && std::isfinite(b.real()) &&
        std::isfinite(b.imag())) {
      out.push_back({n, a, b, hw});
    } else {
      // j_n underflows or h_n overflows at high order; the small-particle limit is exact there.
      cplx bq = mie_b_quasistatic(n, hw, geometry, material);
      if (!std::isfinite(std::abs(bq))) bq = 0.0;
      out.push_back({n, 0.0, bq, hw});
    }
  }
  return out;
}

MieCoefficients mie_coefficients(int n, double hw, const Geometry& geometry,
                                 const Material& material) {
  return mie_coefficients_upto(n, hw, geometry, material).back();
}

cplx mie_b_quasistatic(int n, double hw, const Geometry& geometry, const Material& material) {
  check_order(n);
  const double kb = geometry.index() * units::wavenumber(hw);
  const auto alpha = qs_polarizability(n, hw, geometry, material, false).quasi_static;
  return cplx(0.0, 1.0) * double(n + 1) * std::pow(kb, 2 * n + 1) * radiation_denominator(n) /
         double(n) * alpha;
}

GreenSeries green_rr_from_coefficients(double hw, const Geometry& geometry,
                                       std::span<const cplx> b) {
  geometry.validate();
  const int nmax = static_cast<int>(b.size());
  GreenSeries g;
  g.total = 0.0;
  if (nmax == 0) return g;
  const double kb = geometry.index() * units::wavenumber(hw);
  const double x = kb * geometry.distance;
  const auto h = specfun::spherical_hankel1_sequence(nmax, x);
  const cplx pref(0.0, kb / (4.0 * units::pi));
  g.terms.reserve(nmax);
  for (int n = 1; n <= nmax; ++n) {
    const cplx hx = h[n] / x;
    cplx term = 0.0;
    if (b[n - 1] != 0.0) {
      term = pref * double(n) * double(n + 1) * double(2 * n + 1) * (b[n - 1] * hx) * hx;
    }
    g.terms.push_back(term);
    g.total += term;
  }
  g.converged = std::abs(g.terms.back()) <= 1e-8 * std::abs(g.total);
  return g;
}

GreenSeries green_rr_scattered(double hw, const Geometry& geometry, const Material& material,
                               int n_max) {
  const auto coeffs = mie_coefficients_upto(n_max, hw, geometry, material);
  std::vector<cplx> b;
  b.reserve(coeffs.size());
  for (const auto& c : coeffs) b.push_back(c.b);
  return green_rr_from_coefficients(hw, geometry, b);
}

double green_rr_free_imag(double hw, const Geometry& geometry) {
  return geometry.index() * units::wavenumber(hw) / (6.0 * units::pi);
}

double multipole_fraction(int n, double x) {
  check_order(n);
  if (!(x > 0.0)) {
    if (x == 0.0) return n == 1 ? 1.0 : 0.0;
    throw InvalidArgument("negative radial argument");
  }
  const double j = specfun::spherical_bessel_j(n, x).real() / x;
  return 1.5 * n * (n + 1) * (2 * n + 1) * j * j;
}

RadialDecomposition gamma0n_radial_decomposition(double hw, const Geometry& geometry,
                                                 const Emitter& emitter, int n_max) {
  check_order(n_max);
  if (!(geometry.distance > 0.0)) throw InvalidArgument("emitter distance must be positive");
  RadialDecomposition r;
  r.total_free = radiative_rate(emitter.dipole, hw, geometry.index());
  const double x = geometry.index() * units::wavenumber(hw) * geometry.distance;
  const auto j = specfun::spherical_bessel_j_sequence(n_max, x);
  double captured = 0.0;
  r.rates.reserve(n_max);
  for (int n = 1; n <= n_max; ++n) {
    const double jn = j[n].real() / x;
    const double f = 1.5 * n * (n + 1) * (2 * n + 1) * jn * jn;
    captured += f;
    r.rates.push_back(f * r.total_free);
  }
  r.captured_fraction = captured;
  r.truncated = captured < 0.999;
  return r;
}

Polarizability qs_polarizability(int n, double hw, const Geometry& geometry,
                                 const Material& material, bool radiation_correction) {
  check_order(n);
  const cplx em = material.permittivity(hw);
  const double eb = geometry.eps_b;
  const cplx den = double(n) * em + double(n + 1) * eb;
  if (std::abs(den) < 1e-12) {
    throw SingularityError("quasi-static polarizability pole at " + std::to_string(hw) + " eV");
  }
  const cplx alpha = double(n) * (em - eb) / den * std::pow(geometry.radius, 2 * n + 1);
  if (!radiation_correction) return {alpha, alpha};
  const double kb = geometry.index() * units::wavenumber(hw);
  const double k = double(n + 1) * std::pow(kb, 2 * n + 1) * radiation_denominator(n) / n;
  return {alpha, alpha / (1.0 - cplx(0.0, k) * alpha)};
}

double qs_resonance(int n, const Geometry& geometry, const Material& material) {
  check_order(n);
  double lo = 0.1;
  double hi = 0.0;
  if (material.is_drude()) {
    hi = material.drude_params().hw_p;
  } else {
    lo = std::max(lo, material.table().front().hw);
    hi = material.table().back().hw;
  }
  auto f = [&](double w) {
    return n * material.permittivity(w).real() + (n + 1) * geometry.eps_b;
  };
  double flo = f(lo);
  const double fhi = f(hi);
  if (!(hi > lo) || flo * fhi > 0.0) {
    throw NoResonanceError("no real root of n eps_m + (n+1) eps_b for n = " + std::to_string(n));
  }
  while (hi - lo > 1e-13 * hi) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

QuasiStaticMode qs_mode_params(int n, const Geometry& geometry, const Material& material,
                               const Emitter& emitter) {
  check_order(n);
  geometry.validate();
  if (!material.is_drude()) throw InvalidArgument("quasi-static mode closed forms need Drude");
  const auto& d = material.drude_params();
  const double eb = geometry.eps_b;
  QuasiStaticMode m;
  m.n = n;
  m.hw_n = qs_resonance(n, geometry, material);
  // Pole residue of the Drude polarizability relative to the eps_inf = eps_b = 1 case.
  m.weight = (2 * n + 1) * eb / (n * d.eps_inf + (n + 1) * eb);
  const double kb = geometry.index() * units::wavenumber(m.hw_n);
  m.hgamma_rad = m.weight * m.hw_n * (n + 1) * std::pow(kb * geometry.radius, 2 * n + 1) *
                 radiation_denominator(n) / n;
  m.hgamma = d.hgamma_p + m.hgamma_rad;
  const double R = geometry.radius;
  const double r = geometry.distance;
  const double dd = units::dipole_energy_scale(emitter.dipole);
  const double g2 = 0.5 * m.weight * m.hw_n * dd * (n + 1) * (n + 1) *
                    std::pow(R, 2 * n + 1) / (eb * std::pow(r, 2 * n + 4));
  m.hg = std::sqrt(g2);
  return m;
}

cplx green_rr_first_order(double hw, std::span<const QuasiStaticMode> modes,
                          const Emitter& emitter) {
  const double dd = units::dipole_energy_scale(emitter.dipole);
  if (dd == 0.0) return 0.0;
  const double k0 = units::wavenumber(hw);
  const double scale = 1.0 / (4.0 * units::pi * k0 * k0 * dd);
  cplx sum = 0.0;
  for (const auto& m : modes) {
    const double dw = hw - m.hw_n;
    const double hg = 0.5 * m.hgamma;
    sum += m.hg * m.hg * cplx(-dw, hg) / (dw * dw + hg * hg);
  }
  return scale * sum;
}

cplx green_rr_quasistatic(double hw, const Geometry& geometry, const Material& material,
                          const Emitter& emitter, int n_max) {
  std::vector<QuasiStaticMode> modes;
  modes.reserve(n_max);
  for (int n = 1; n <= n_max; ++n) modes.push_back(qs_mode_params(n, geometry, material, emitter));
  return green_rr_first_order(hw, modes, emitter);
}

}  // namespace pcqed
