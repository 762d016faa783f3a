// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#include "app/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "app/pipeline.hpp"
#include "pcqed/coupling.hpp"
#include "pcqed/heff.hpp"
#include "pcqed/lindblad.hpp"
#include "pcqed/mie.hpp"
#include "pcqed/specfun.hpp"
#include "pcqed/units.hpp"

namespace pcqed::app {

namespace {

Check upper(std::string name, double value, double tol) {
  return {std::move(name), value, tol, std::isfinite(value) && value <= tol};
}

Check lower(std::string name, double value, double bound) {
  return {std::move(name), value, bound, std::isfinite(value) && value >= bound};
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Emitter toy_emitter(double hw0, double hgamma0, double eta) {
  Emitter e;
  e.hw0 = hw0;
  e.hgamma0 = hgamma0;
  e.quantum_yield = eta;
  return e;
}

// Resolved modes whose emitter shares gamma0n^rad = gamma0^rad/(N+1) keep every Fano
// construction physical (no gain); the sign of each alpha is random.
std::vector<ModeParams> random_modes(std::mt19937_64& rng, int count, const Emitter& e) {
  std::uniform_real_distribution<double> det(-0.15, 0.15), width(0.02, 0.2), cpl(0.005, 0.08),
      frac(0.2, 1.0);
  std::bernoulli_distribution flip(0.5);
  std::vector<ModeParams> out;
  for (int n = 1; n <= count; ++n) {
    ModeParams m;
    m.n = n;
    m.hw_n = e.hw0 + det(rng);
    m.hgamma = width(rng);
    m.hgamma_rad = frac(rng) * m.hgamma;
    m.hgamma_nr = m.hgamma - m.hgamma_rad;
    m.hg = cpl(rng);
    m.hgamma0n_rad = e.hgamma0_rad() / (count + 1);
    m.fano_ratio = (flip(rng) ? -1.0 : 1.0) * std::sqrt(m.hgamma0n_rad * m.hgamma_rad) / m.hg;
    m.radiative_resolved = true;
    m.fano_resolved = true;
    out.push_back(m);
  }
  return out;
}

EffectiveHamiltonian direct(MasterKind k, const std::vector<ModeParams>& m, const Emitter& e) {
  switch (k) {
    case MasterKind::fano_radiative: return build_fano(m, e, FanoVariant::radiative_only);
    case MasterKind::fano_full: return build_fano(m, e, FanoVariant::general);
    default: return build_standard(m, e);
  }
}

double biorthogonality_error(const DressedSet& d) {
  const auto n = d.size();
  return (d.left.adjoint() * d.right - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
}

double max_secular_residual(const EffectiveHamiltonian& h, const DressedSet& d) {
  double worst = 0.0;
  for (int m = 0; m < d.size(); ++m) {
    worst = std::max(worst, arrowhead_secular_residual(h.matrix, d.eigenvalues[m]));
  }
  return worst;
}

}  // namespace

nlohmann::json to_json(const Check& c) {
  return {{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}};
}

std::vector<Check> lindblad_equivalence(int draws, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  const MasterKind kinds[] = {MasterKind::standard, MasterKind::fano_radiative,
                              MasterKind::fano_full};
  double dev = 0.0, trace = 0.0, herm = 0.0, eig = 0.0, matrix = 0.0;
  for (int k = 0; k < draws; ++k) {
    const auto e = toy_emitter(2.8, std::uniform_real_distribution<double>(0.005, 0.05)(rng),
                               std::uniform_real_distribution<double>(0.5, 1.0)(rng));
    const int count = 1 + k % 5;
    const auto modes = random_modes(rng, count, e);
    for (auto kind : kinds) {
      const auto me = build_master_equation(kind, modes, e);
      const auto h = effective_hamiltonian_from_lindblad(me);
      matrix = std::max(matrix, (h.matrix - direct(kind, modes, e).matrix).cwiseAbs().maxCoeff());
      Eigen::VectorXcd psi0(count + 1);
      for (auto& c : psi0) c = cplx(z(rng), z(rng));
      psi0.normalize();
      const auto t = linspace(0.0, 10.0 / e.hgamma0, 41);
      const auto rho = evolve_master(me.liouvillian, sector_density(psi0), t, 1e-10, 1e-14);
      const auto amp = evolve_numeric(h, psi0, t, 1e-11, 1e-13);
      for (std::size_t i = 0; i < t.size(); ++i) {
        const Eigen::MatrixXcd sector = rho[i].rho.bottomRightCorner(count + 1, count + 1);
        const Eigen::MatrixXcd ref = amp[i].amplitude * amp[i].amplitude.adjoint();
        dev = std::max(dev, (sector - ref).cwiseAbs().maxCoeff());
        trace = std::max(trace, std::abs(rho[i].trace() - 1.0));
        herm = std::max(herm, rho[i].hermiticity_error());
        eig = std::min(eig, rho[i].min_eigenvalue());
      }
    }
  }
  return {upper("lindblad_vs_heff_populations", dev, 1e-6),
          upper("lindblad_heff_matrix", matrix, 1e-14),
          upper("lindblad_trace", trace, 1e-9),
          lower("lindblad_positivity", eig, -1e-9),
          upper("lindblad_hermiticity", herm, 1e-12)};
}

std::vector<Check> eigensystem_properties(int draws, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double bio = 0.0, sec = 0.0, sum_rule = 0.0;
  for (int k = 0; k < draws; ++k) {
    const auto e = toy_emitter(2.9, 0.004, 0.8);
    const auto modes = random_modes(rng, 1 + k % 6, e);
    for (bool fano : {false, true}) {
      const auto h = fano ? build_fano(modes, e, FanoVariant::general) : build_standard(modes, e);
      const auto d = eigendecompose(h);
      bio = std::max(bio, biorthogonality_error(d));
      sec = std::max(sec, max_secular_residual(h, d));
    }
  }
  // Residue sum rule against trapezoid quadrature of P on +-L plus the 1/w^2 tails.
  {
    const auto e = toy_emitter(2.9, 0.004, 1.0);
    const auto d = eigendecompose(build_standard(random_modes(rng, 3, e), e));
    const double L = 200.0;
    const std::size_t n = 4000001;
    const double step = 2 * L / (n - 1);
    double area = 0.0, prev = 0.0;
    const std::size_t chunk = 200000;
    for (std::size_t start = 0; start < n; start += chunk) {
      std::vector<double> grid;
      for (std::size_t i = start; i < std::min(n, start + chunk); ++i) grid.push_back(2.9 - L + i * step);
      const auto p = polarization_spectrum(d, grid);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        if (start + i > 0) area += 0.5 * (p.spectrum.values[i] + prev) * step;
        prev = p.spectrum.values[i];
      }
    }
    area += 2.0 / L;
    sum_rule = rel(area / (2 * units::pi), polarization_sum_rule(d));
  }
  return {upper("biorthogonality", bio, 1e-10), upper("secular_residual", sec, 1e-8),
          upper("polarization_sum_rule", sum_rule, 1e-6)};
}

Check gauge_invariance(int draws, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto geom = Geometry::from_gap(8.0, 1.0, 3.0);
  const auto silver = Material::silver_drude();
  auto e = Emitter::from_dipole(2.9, 20.0, 1e-4, geom);
  double worst = 0.0;
  for (int k = 0; k < draws; ++k) {
    const auto modes = random_modes(rng, 5, e);
    for (bool fano : {false, true}) {
      const auto ha = fano ? build_fano(modes, e, FanoVariant::general) : build_standard(modes, e);
      auto hb = ha;
      for (int n = 1; n <= 5; ++n) {
        if (rng() % 2) {
          hb.matrix(0, n) = -hb.matrix(0, n);
          hb.matrix(n, 0) = -hb.matrix(n, 0);
        }
      }
      const auto da = eigendecompose(ha), db = eigendecompose(hb);
      worst = std::max(worst, (da.eigenvalues - db.eigenvalues).cwiseAbs().maxCoeff());
      const std::vector<double> t{0.0, 20.0, 100.0, 400.0};
      const auto sa = evolve(da, excited_emitter(6), t), sb = evolve(db, excited_emitter(6), t);
      for (std::size_t i = 0; i < t.size(); ++i) {
        worst = std::max(worst, (sa[i].amplitude.cwiseAbs2() - sb[i].amplitude.cwiseAbs2())
                                    .cwiseAbs()
                                    .maxCoeff());
      }
      const auto grid = linspace(2.7, 3.1, 41);
      const auto pa = polarization_spectrum(da, grid), pb = polarization_spectrum(db, grid);
      const auto ra = radiated_spectrum(ha, grid, geom, silver, e);
      const auto rb = radiated_spectrum(hb, grid, geom, silver, e);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        worst = std::max(worst, rel(pb.spectrum.values[i], pa.spectrum.values[i]));
        worst = std::max(worst, rel(rb.p_rad[i], ra.p_rad[i]));
      }
    }
  }
  return upper("sign_gauge_invariance", worst, 1e-10);
}

Check fano_reduction(int draws, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto e = toy_emitter(2.8, 0.01, 1.0);
  double worst = 0.0;
  for (int k = 0; k < draws; ++k) {
    auto modes = random_modes(rng, 1 + k % 5, e);
    for (auto& m : modes) {
      m.fano_ratio = 0.0;
      m.hgamma0n_rad = 0.0;
    }
    const auto std_h = build_standard(modes, e);
    worst = std::max(worst, (build_fano(modes, e, FanoVariant::general).matrix - std_h.matrix)
                                .cwiseAbs()
                                .maxCoeff());
    // Lindblad: the full Fano dissipator set with alpha = 0 generates the standard Liouvillian
    // up to how the emitter rate is split between channels.
    const auto a = build_master_equation(MasterKind::fano_full, modes, e);
    const auto b = build_master_equation(MasterKind::standard, modes, e);
    worst = std::max(worst, Eigen::MatrixXcd(a.liouvillian - b.liouvillian).cwiseAbs().maxCoeff());
    worst = std::max(worst, (effective_hamiltonian_from_lindblad(a).matrix - std_h.matrix)
                                .cwiseAbs()
                                .maxCoeff());
  }
  return upper("fano_alpha0_reduction", worst, 1e-15);
}

Check lorentzian_round_trip(int draws, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> w_d(2.5, 3.2), gam_d(0.01, 0.2), g_d(0.001, 0.1);
  double worst = 0.0;
  for (int k = 0; k < draws; ++k) {
    const double w = w_d(rng), gam = gam_d(rng), g = g_d(rng);
    CouplingSpectrum s{1, {linspace(w - 6 * gam, w + 6 * gam, 241), {}}};
    for (double x : s.data.hw) s.data.values.push_back(lorentzian_kappa(x, w, gam, g));
    const auto p = fit_lorentzian(s);
    worst = std::max({worst, rel(p.hw_n, w), rel(p.hgamma, gam), rel(p.hg, g)});
  }
  return upper("lorentzian_round_trip", worst, 1e-6);
}

Check fano_round_trip(int draws, std::uint64_t seed) {
  const auto geom = Geometry::from_gap(50.0, 1.0, 30.0);
  const FanoModelContext ctx{1, geom, Emitter::from_dipole(2.6, 1.0, 0.0, geom)};
  const auto grid = linspace(2.0, 3.3, 260);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> w_d(2.45, 2.75), gr_d(0.1, 0.35), g_d(1e-5, 1e-4);
  std::bernoulli_distribution sign_d(0.5);
  double worst = 0.0;
  for (int k = 0; k < draws; ++k) {
    const double w = w_d(rng), gr = gr_d(rng);
    const double g = (sign_d(rng) ? 1.0 : -1.0) * g_d(rng);
    Spectrum s{grid, {}};
    for (double x : grid) s.values.push_back(fano_rate_model(x, ctx, w, gr, 0.0, g));
    const auto fit = fit_fano_rate(s, ctx);
    worst = std::max({worst, rel(fit.mode.hw_n, w), rel(fit.mode.hgamma_rad, gr),
                      rel(fit.signed_hg, g)});
  }
  return upper("fano_round_trip", worst, 1e-6);
}

std::vector<Check> run_verification(const Scenario& s) {
  std::vector<Check> out;
  const auto material = s.make_material();
  const auto e = s.make_emitter();

  // Bessel Wronskian j_n h_{n-1} - j_{n-1} h_n = i/z^2 at the scenario's size parameters.
  {
    const auto k = wavenumbers(s.geometry, material, e.hw0);
    double worst = 0.0;
    for (cplx z : {cplx(k.kb * s.geometry.radius), k.km * s.geometry.radius,
                   cplx(k.kb * s.geometry.distance)}) {
      const int nmax = std::min(s.modes + 1, 40);
      const auto j = specfun::spherical_bessel_j_sequence(nmax, z);
      const auto h = specfun::spherical_hankel1_sequence(nmax, z);
      for (int n = 1; n <= nmax; ++n) {
        const cplx w = (j[n] * h[n - 1] - j[n - 1] * h[n]) * z * z;
        const double scale = std::abs(j[n] * h[n - 1] * z * z) + 1.0;
        worst = std::max(worst, std::abs(w - cplx(0, 1)) / scale);
      }
    }
    out.push_back(upper("bessel_wronskian", worst, 1e-10));
  }
  // Multipole decomposition of the free radial rate sums to one.
  {
    double worst = 0.0;
    const double x_d = s.geometry.index() * units::wavenumber(e.hw0) * s.geometry.distance;
    for (double x : {0.1, 0.5, 2.0, x_d}) {
      double sum = 0.0;
      for (int n = 1; n <= 60; ++n) sum += multipole_fraction(n, x);
      worst = std::max(worst, std::abs(sum - 1.0));
    }
    out.push_back(upper("multipole_sum_rule", worst, 1e-6));
  }
  // Coupling spectrum against the Fermi golden rule: 2 pi kappa_n / gamma_0^rad(w).
  {
    const auto grid = linspace(s.grid.min, s.grid.max, 9);
    const int orders = std::min(s.modes, 6);
    const auto kap = kappa_spectra(orders, grid, s.geometry, material, e);
    double worst = 0.0;
    for (int n = 1; n <= orders; ++n) {
      const auto fermi = fermi_rate_spectrum(n, grid, s.geometry, material, 1.0);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double g0 = radiative_rate(e.dipole, grid[i], s.geometry.index());
        worst = std::max(worst, rel(2 * units::pi * kap[n - 1].data.values[i] / g0, fermi.values[i]));
      }
    }
    out.push_back(upper("kappa_vs_fermi", worst, 1e-10));
  }
  // Scenario Hamiltonian: eigensystem and spectrum against the frequency-domain solve.
  try {
    const auto modes = extract(s, e);
    const auto h = build_standard(modes, e);
    const auto d = eigendecompose(h);
    out.push_back(upper("scenario_biorthogonality", biorthogonality_error(d), 1e-10));
    out.push_back(upper("scenario_secular_residual", max_secular_residual(h, d), 1e-8));
    const auto grid = linspace(s.grid.min, s.grid.max, 17);
    const auto p = polarization_spectrum(d, grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      worst = std::max(worst, rel(p.spectrum.values[i], std::norm(frequency_amplitudes(h, grid[i])[0])));
    }
    out.push_back(upper("scenario_spectrum_vs_solve", worst, 1e-8));
  } catch (const TaskFailure& f) {
    out.push_back({std::string("scenario_modes: ") + f.what(), 1.0, 0.0, false});
  }
  for (auto& c : lindblad_equivalence(20, 2024)) out.push_back(c);
  for (auto& c : eigensystem_properties(20, 17)) out.push_back(c);
  out.push_back(gauge_invariance(5, 5));
  out.push_back(fano_reduction(10, 3));
  out.push_back(lorentzian_round_trip(100, 20261016));
  out.push_back(fano_round_trip(100, 7));
  return out;
}

}  // namespace pcqed::app
