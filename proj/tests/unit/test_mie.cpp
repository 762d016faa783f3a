// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <vector>

#include "doctest.h"
#include "pcqed/errors.hpp"
#include "pcqed/mie.hpp"
#include "pcqed/units.hpp"

using namespace pcqed;

namespace {

const Material kSilver = Material::silver_drude();

Emitter test_emitter(const Geometry& g, double hw0 = 2.94, double dipole = 24.0) {
  return Emitter::from_dipole(hw0, dipole, 0.0, g);
}

// Peak of |f| over a uniform grid, refined by a parabola through the top three samples.
template <class F>
double peak_position(F f, double lo, double hi, int points) {
  std::vector<double> w(points), v(points);
  for (int i = 0; i < points; ++i) {
    w[i] = lo + (hi - lo) * i / (points - 1);
    v[i] = f(w[i]);
  }
  int k = 1;
  for (int i = 1; i < points - 1; ++i)
    if (v[i] > v[k]) k = i;
  const double a = v[k - 1], b = v[k], c = v[k + 1];
  const double h = w[1] - w[0];
  return w[k] + 0.5 * h * (a - c) / (a - 2 * b + c);
}

}  // namespace

TEST_CASE("vanishing sphere") {
  const Geometry g{1e-3, 1.0, 1.0};
  CHECK(std::abs(mie_coefficients(1, 2.9, g, kSilver).b) < 1e-12);
}

TEST_CASE("small sphere B_1 follows the quasi-static form") {
  const Geometry g{8.0, 1.0, 10.0};
  const cplx exact = mie_coefficients(1, 2.9, g, kSilver).b;
  const cplx qs = mie_b_quasistatic(1, 2.9, g, kSilver);
  CHECK(std::abs(exact - qs) / std::abs(exact) < 0.05);
  // Higher orders agree as well at this size.
  const auto all = mie_coefficients_upto(4, 3.2, g, kSilver);
  for (int n = 2; n <= 4; ++n) {
    const cplx q = mie_b_quasistatic(n, 3.2, g, kSilver);
    CHECK(std::abs(all[n - 1].b - q) / std::abs(q) < 0.05);
  }
}

TEST_CASE("large sphere B_1 departs from the quasi-static form") {
  const Geometry g{50.0, 1.0, 80.0};
  const cplx exact = mie_coefficients(1, 2.6, g, kSilver).b;
  const cplx qs = mie_b_quasistatic(1, 2.6, g, kSilver);
  CHECK(std::abs(exact - qs) / std::abs(exact) > 0.2);
}

TEST_CASE("scattered Green tensor with no scatterer") {
  const Geometry g{8.0, 1.0, 10.0};
  std::vector<cplx> zeros(10, 0.0);
  const auto s = green_rr_from_coefficients(2.8, g, zeros);
  CHECK(s.total == cplx(0.0));
  CHECK(s.terms.size() == 10);
}

TEST_CASE("scattered Green tensor resonance positions") {
  const Geometry g = Geometry::from_gap(8.0, 1.0, 2.0);
  auto term = [&](int n) {
    return [&, n](double w) { return green_rr_scattered(w, g, kSilver, n).terms[n - 1].imag(); };
  };
  const double w1 = peak_position(term(1), 2.6, 3.0, 801);
  CHECK(w1 == doctest::Approx(2.79).epsilon(0.005));
  for (int n = 1; n <= 3; ++n) {
    const double qs = qs_resonance(n, g, kSilver);
    const double w = peak_position(term(n), qs - 0.2, qs + 0.2, 801);
    CHECK(std::abs(w - qs) / qs < 0.01);
  }
  const auto s = green_rr_scattered(2.9, g, kSilver, 30);
  CHECK(s.terms.size() == 30);
}

TEST_CASE("convergence flag") {
  const Geometry g = Geometry::from_gap(8.0, 1.0, 2.0);
  CHECK_FALSE(green_rr_scattered(2.9, g, kSilver, 2).converged);
  const Geometry far = Geometry::from_gap(8.0, 1.0, 20.0);
  CHECK(green_rr_scattered(2.9, far, kSilver, 30).converged);
}

TEST_CASE("total local density of states stays positive") {
  for (double h : {1.0, 2.0, 5.0}) {
    const Geometry g = Geometry::from_gap(8.0, 1.0, h);
    for (double w = 1.5; w <= 4.0; w += 0.01) {
      const double im = green_rr_scattered(w, g, kSilver, 30).total.imag();
      CHECK(im + green_rr_free_imag(w, g) > 0.0);
    }
  }
}

TEST_CASE("per-order terms are single peaked for small spheres") {
  const Geometry g = Geometry::from_gap(10.0, 1.0, 2.0);
  const int npts = 300;
  std::vector<std::vector<double>> curves(6, std::vector<double>(npts));
  for (int i = 0; i < npts; ++i) {
    const double w = 2.0 + 1.5 * i / (npts - 1);
    const auto s = green_rr_scattered(w, g, kSilver, 6);
    for (int n = 0; n < 6; ++n) curves[n][i] = std::abs(s.terms[n].imag());
  }
  for (const auto& c : curves) {
    int turns = 0;
    for (int i = 1; i + 1 < npts; ++i) {
      if ((c[i] - c[i - 1]) * (c[i + 1] - c[i]) < 0.0) ++turns;
    }
    CHECK(turns == 1);
  }
}

TEST_CASE("radial decomposition of the free-space rate") {
  for (double x : {0.1, 0.5, 2.0}) {
    double sum = 0.0;
    for (int n = 1; n <= 60; ++n) sum += multipole_fraction(n, x);
    CHECK(std::abs(sum - 1.0) < 1e-6);
  }
  const double hw = 2.0;
  const double k0 = units::wavenumber(hw);
  const Geometry g{8.0, 1.0, 0.5 / k0};
  const auto e = Emitter::from_dipole(hw, 5.0, 0.0, g);
  const auto d = gamma0n_radial_decomposition(hw, g, e, 60);
  double total = 0.0;
  for (double r : d.rates) total += r;
  CHECK(std::abs(total / radiative_rate(5.0, hw, 1.0) - 1.0) < 1e-6);
  CHECK_FALSE(d.truncated);

  CHECK(multipole_fraction(1, 1e-5) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(multipole_fraction(2, 1e-5) < 1e-9);
  CHECK(multipole_fraction(2, 2.0) > 0.0);
  CHECK(gamma0n_radial_decomposition(hw, Geometry{8.0, 1.0, 20.0 / k0}, e, 5).truncated);
}

TEST_CASE("quasi-static polarizability") {
  const Geometry g{8.0, 1.0, 10.0};
  const auto matched = Material::drude(2.0, 1.0, 0.0);  // eps_m = 1 at hw = 1
  CHECK(std::abs(qs_polarizability(1, 1.0, g, matched).quasi_static) < 1e-12);

  const auto ideal = Material::drude(1.0, 6.0, 0.0);
  const double w1 = 6.0 / std::sqrt(3.0);
  CHECK_THROWS_AS(qs_polarizability(1, w1, g, ideal), SingularityError);
  const double a_near = std::abs(qs_polarizability(1, w1 * (1 + 1e-6), g, ideal).quasi_static);
  const double a_off = std::abs(qs_polarizability(1, w1 * (1 + 1e-3), g, ideal).quasi_static);
  CHECK(a_near > 100 * a_off);

  // Re eps = eps_inf - wp^2/(w^2 + gp^2) puts the root at sqrt(wp^2/8 - gp^2).
  const double w_root = std::sqrt(7.9 * 7.9 / 8.0 - 0.051 * 0.051);
  CHECK(qs_resonance(1, g, kSilver) == doctest::Approx(w_root).epsilon(1e-10));
  CHECK(qs_resonance(1, g, kSilver) == doctest::Approx(2.793).epsilon(1e-3));
  CHECK(qs_resonance(1, g, Material::drude(6.0, 7.9, 0.0)) ==
        doctest::Approx(7.9 / std::sqrt(8.0)).epsilon(1e-10));

  const auto p = qs_polarizability(2, 3.0, g, kSilver, false);
  CHECK(p.effective == p.quasi_static);
}

TEST_CASE("quasi-static resonances") {
  const Geometry g{8.0, 1.0, 10.0};
  const auto ideal = Material::drude(1.0, 8.0, 0.0);
  for (int n = 1; n <= 6; ++n) {
    const double exact = 8.0 * std::sqrt(double(n) / (2 * n + 1));
    CHECK(std::abs(qs_resonance(n, g, ideal) / exact - 1.0) < 1e-6);
  }
  double prev = 0.0;
  const double bound = 7.9 / std::sqrt(6.0 + 1.0);
  for (int n = 1; n <= 30; ++n) {
    const double w = qs_resonance(n, g, kSilver);
    CHECK(w > prev);
    CHECK(w < bound);
    prev = w;
  }
  const auto dielectric = Material::drude(1.0, 0.05, 0.0);
  CHECK_THROWS_AS(qs_resonance(1, g, dielectric), NoResonanceError);
}

TEST_CASE("quasi-static mode parameters") {
  const auto ideal = Material::drude(1.0, 8.0, 0.05);
  const Geometry g1{5.0, 1.0, 10.0};
  const Geometry g2{10.0, 1.0, 20.0};
  const auto e = test_emitter(g1);
  const auto m1 = qs_mode_params(1, g1, ideal, e);
  const auto m2 = qs_mode_params(1, g2, ideal, e);
  CHECK(m1.weight == doctest::Approx(1.0));
  CHECK(m2.hgamma_rad / m1.hgamma_rad == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(m1.hgamma == doctest::Approx(0.05 + m1.hgamma_rad));

  const auto near = qs_mode_params(1, Geometry{5.0, 1.0, 10.0}, ideal, e);
  const auto far = qs_mode_params(1, Geometry{5.0, 1.0, 12.0}, ideal, e);
  CHECK(far.hg / near.hg == doctest::Approx(std::pow(10.0 / 12.0, 3)).epsilon(1e-12));

  const auto m = qs_mode_params(2, g1, ideal, e);
  CHECK(m.hw_n == doctest::Approx(8.0 * std::sqrt(0.4)).epsilon(1e-3));
}

TEST_CASE("first-order Green resonance") {
  const Geometry g = Geometry::from_gap(8.0, 1.0, 2.0);
  const auto e = test_emitter(g);
  const auto m = qs_mode_params(1, g, kSilver, e);
  const std::vector<QuasiStaticMode> one{m};
  const cplx on = green_rr_first_order(m.hw_n, one, e);
  const double k0 = units::wavenumber(m.hw_n);
  const double dd = units::dipole_energy_scale(e.dipole);
  CHECK(std::abs(on.real()) < 1e-15 * std::abs(on));
  CHECK(on.imag() ==
        doctest::Approx(m.hg * m.hg * 2.0 / (4 * units::pi * k0 * k0 * dd * m.hgamma)));

  for (double w : {m.hw_n - 0.005, m.hw_n, m.hw_n + 0.005}) {
    const double exact = green_rr_scattered(w, g, kSilver, 1).terms[0].imag();
    CHECK(std::abs(green_rr_first_order(w, one, e).imag() / exact - 1.0) < 0.15);
  }

  QuasiStaticMode dark = m;
  dark.hg = 0.0;
  const std::vector<QuasiStaticMode> none{dark};
  CHECK(green_rr_first_order(2.8, none, e) == cplx(0.0));
}

TEST_CASE("high-order series stays finite") {
  const auto silver = Material::silver_drude();
  const auto geom = Geometry::from_gap(8.0, 1.0, 3.0);
  const double hw = units::wavelength_to_energy(670.0);
  const auto ref = green_rr_scattered(hw, geom, silver, 60);
  for (int n_max : {120, 200}) {
    const auto g = green_rr_scattered(hw, geom, silver, n_max);
    CHECK(std::isfinite(g.total.real()));
    CHECK(std::isfinite(g.total.imag()));
    CHECK(g.converged);
    CHECK(std::abs(g.total - ref.total) <= 1e-12 * std::abs(ref.total));
  }
}
