// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "app/pipeline.hpp"
#include "app/verify.hpp"
#include "pcqed/coupling.hpp"
#include "pcqed/heff.hpp"
#include "pcqed/medium.hpp"
#include "pcqed/mie.hpp"
#include "pcqed/units.hpp"
#include "pcqed/weak.hpp"

using namespace pcqed;

namespace {

const Material kSilver = Material::silver_drude();
const Material kSilverLossless = Material::drude(6.0, 7.90, 0.0);

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [out of tolerance]");
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// Criterion 1: Lorentzian linewidths of the six lowest modes, R = 8 nm, h = 2 nm.
Outcome linewidths() {
  Outcome o;
  const auto geom = Geometry::from_gap(8.0, 1.0, 2.0);
  const auto e = Emitter::from_dipole(2.94, 24.0, 0.0, geom);
  const auto modes = extract_modes(6, linspace(2.0, 3.6, 1601), geom, kSilver, e);
  double worst = 0.0;
  for (const auto& m : modes) worst = std::max(worst, rel(m.hgamma, 0.051));
  o.require(worst <= 0.10, fmt("max |hGamma_n/51 meV - 1| = %.4f (tol 0.10)", worst));
  return o;
}

// Criterion 2: strong coupling at 2.94 eV with 25 modes.
Outcome strong_coupling() {
  Outcome o;
  const auto geom = Geometry::from_gap(8.0, 1.0, 2.0);
  const auto e = Emitter::from_dipole(2.94, 24.0, 0.0, geom);
  const auto modes = extract_modes(25, linspace(2.0, 3.6, 1601), geom, kSilver, e);
  const auto h = build_standard(modes, e);
  const auto d = eigendecompose(h);
  const auto grid = linspace(2.6, 3.2, 1201);
  const auto pol = polarization_spectrum(d, grid);
  const auto pk = app::two_highest_peaks(grid, pol.spectrum.values);
  const double split = dominant_splitting(d);
  const double sep = pk.size() == 2 ? pk[1] - pk[0] : std::nan("");
  const auto r = radiated_spectrum(h, grid, geom, kSilver, e);
  const auto top = std::max_element(r.c1_population.begin(), r.c1_population.end());
  const double c1 = r.hw[static_cast<std::size_t>(top - r.c1_population.begin())];
  o.require(rel(split, 0.144) <= 0.10, fmt("splitting %.4f eV (144 meV +-10%%)", split));
  o.require(rel(sep, 0.144) <= 0.10, fmt("P(w) peak separation %.4f eV (144 meV +-10%%)", sep));
  o.require(std::abs(c1 - 2.79) <= 0.03, fmt("|C1|^2 maximum at %.4f eV (2.79 +-0.03)", c1));
  return o;
}

// Criterion 3: weak coupling by three routes.
Outcome weak_coupling() {
  Outcome o;
  const auto geom = Geometry::from_gap(8.0, 1.0, 5.0);
  const auto e = Emitter::from_lifetime(units::wavelength_to_energy(670.0), 50.0, 0.9, geom);
  const auto modes = extract_modes(25, linspace(2.0, 3.6, 1601), geom, kSilver, e);
  const double fr = fermi_rate(geom, kSilver, e, 120).ratio;
  const double ad = adiabatic_rates(modes, e).ratio();
  const double rate = app::dynamics_decay_rate(modes, e);
  const double dy = rate / e.hgamma0;
  const double tau = units::internal_to_ns(1.0 / rate);
  for (auto [name, v] : {std::pair{"Fermi", fr}, {"adiabatic", ad}, {"dynamics", dy}}) {
    o.require(rel(v, 30.0) <= 0.15, std::string(name) + fmt(" %.3f (30 +-15%%)", v));
  }
  const double pair = std::max({rel(ad, fr), rel(dy, fr), rel(dy, ad)});
  o.require(pair <= 0.05, fmt("pairwise %.4f (<= 0.05)", pair));
  o.require(rel(tau, 1.7) <= 0.15, fmt("lifetime %.3f ns (1.7 +-15%%)", tau));
  return o;
}

// Criterion 4: Fano regime of the 50 nm sphere.
Outcome fano_regime() {
  Outcome o;
  const auto grid = linspace(2.0, 3.3, 400);
  for (double h : {30.0, 15.0}) {
    const auto geom = Geometry::from_gap(50.0, 1.0, h);
    const auto e = Emitter::from_dipole(2.6, 1.0, 0.0, geom);
    const auto f = app::fano_order(1, grid, geom, kSilver, e, true);
    const auto& lossy = *f.lossy;
    if (h == 30.0) {
      o.require(rel(f.lossless.q_factor, -4.2) <= 0.15, fmt("q_F %.3f (-4.2 +-15%%)", f.lossless.q_factor));
      o.require(rel(f.lossless.purcell_rad, 14.2) <= 0.15,
                fmt("F_rad(30) %.2f (14.2 +-15%%)", f.lossless.purcell_rad));
      o.require(rel(lossy.mode.hgamma_nr, 0.040) <= 0.25,
                fmt("hGamma_nr %.4f eV (0.040 +-25%%)", lossy.mode.hgamma_nr));
      o.require(rel(lossy.purcell, 12.2) <= 0.15, fmt("F_p(30) %.2f (12.2 +-15%%)", lossy.purcell));
    } else {
      o.require(rel(f.lossless.purcell_rad, 40.7) <= 0.15,
                fmt("F_rad(15) %.2f (40.7 +-15%%)", f.lossless.purcell_rad));
      o.require(rel(lossy.purcell, 35.1) <= 0.15, fmt("F_p(15) %.2f (35.1 +-15%%)", lossy.purcell));
    }
    const double identity =
        rel(lossy.purcell, lossy.mode.hgamma_rad / lossy.mode.hgamma * lossy.purcell_rad);
    o.require(identity <= 1e-10, fmt("F_p identity %.2e (1e-10)", identity));
    // Negative alpha puts the dip on the blue side of the resonance.
    const double dip = fano_dip_energy(f.lossless.mode);
    o.require((f.lossless.mode.fano_ratio < 0) == (dip > f.lossless.mode.hw_n),
              fmt("dip at %.3f eV on the side set by alpha = %.3f", dip, f.lossless.mode.fano_ratio));
  }
  return o;
}

// Criterion 5: quasi-static resonances of a lossless Drude sphere with eps_inf = 1.
Outcome quasi_static() {
  Outcome o;
  const double hw_p = 7.90;
  const auto m = Material::drude(1.0, hw_p, 0.0);
  const auto geom = Geometry::from_gap(8.0, 1.0, 2.0);
  double worst = 0.0;
  for (int n = 1; n <= 6; ++n) {
    const double exact = hw_p * std::sqrt(n / (2.0 * n + 1.0));
    worst = std::max(worst, rel(qs_resonance(n, geom, m), exact));
  }
  o.require(worst <= 1e-6, fmt("max rel deviation %.2e (1e-6)", worst));
  return o;
}

// Criterion 6: radial multipole rates sum to the free radiative rate.
Outcome sum_rule() {
  Outcome o;
  const double hw = 2.9;
  const double kb = units::wavenumber(hw);
  for (double x : {0.1, 0.5, 2.0}) {
    const Geometry geom{std::min(1.0, 0.5 * x / kb), 1.0, x / kb};
    const auto e = Emitter::from_dipole(hw, 5.0, 0.0, geom);
    const auto d = gamma0n_radial_decomposition(hw, geom, e, 60);
    double sum = 0.0;
    for (double r : d.rates) sum += r;
    const double dev = rel(sum, e.hgamma0_rad());
    o.require(dev <= 1e-6, fmt("k_b r_d = %.1f: %.2e (1e-6)", x, dev));
  }
  return o;
}

Outcome from_checks(const std::vector<app::Check>& checks) {
  Outcome o;
  for (const auto& c : checks) o.require(c.pass, c.name + fmt(" %.2e", c.value));
  return o;
}

// Criterion 7: Lindblad / effective-Hamiltonian equivalence and eigensystem invariants.
Outcome route_equivalence() {
  std::vector<app::Check> all = app::lindblad_equivalence(20, 2024);
  for (auto& c : app::eigensystem_properties(20, 17)) all.push_back(c);
  all.push_back(app::gauge_invariance(5, 5));
  all.push_back(app::fano_reduction(10, 3));
  return from_checks(all);
}

// Criterion 8: fitter round trips over 100 draws.
Outcome round_trips() {
  return from_checks({app::lorentzian_round_trip(100, 20261016), app::fano_round_trip(100, 7)});
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"small-sphere linewidths", linewidths},
      {"strong-coupling splitting", strong_coupling},
      {"weak-coupling rates", weak_coupling},
      {"Fano regime", fano_regime},
      {"quasi-static resonances", quasi_static},
      {"multipole sum rule", sum_rule},
      {"route equivalence", route_equivalence},
      {"fitter round trip", round_trips},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %zu (%s, %.2f s): %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first, s, o.detail.c_str());
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
