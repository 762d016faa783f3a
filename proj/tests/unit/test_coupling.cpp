// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "pcqed/coupling.hpp"
#include "pcqed/errors.hpp"
#include "pcqed/lm.hpp"
#include "pcqed/mie.hpp"
#include "pcqed/parallel.hpp"
#include "pcqed/units.hpp"

using namespace pcqed;

namespace {

const Material kSilver = Material::silver_drude();
const Material kLossless = Material::drude(6.0, 7.90, 0.0);

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

CouplingSpectrum synthetic_lorentzian(double w, double gam, double g, double lo, double hi,
                                      std::size_t points) {
  CouplingSpectrum s{1, {linspace(lo, hi, points), {}}};
  for (double x : s.data.hw) s.data.values.push_back(lorentzian_kappa(x, w, gam, g));
  return s;
}

FanoModelContext fano_context(double gap) {
  const auto geom = Geometry::from_gap(50.0, 1.0, gap);
  return {1, geom, Emitter::from_dipole(2.6, 1.0, 0.0, geom)};
}

Spectrum synthetic_fano(const FanoModelContext& ctx, double w, double grad, double gnr, double g,
                        const std::vector<double>& grid) {
  Spectrum s{grid, {}};
  for (double x : grid) s.values.push_back(fano_rate_model(x, ctx, w, grad, gnr, g));
  return s;
}

// ||model - data|| / ||data|| over the fitted window.
double norm_deviation(const Spectrum& s, const ModeParams& p) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double d = lorentzian_kappa(s.hw[i], p.hw_n, p.hgamma, p.hg) - s.values[i];
    num += d * d;
    den += s.values[i] * s.values[i];
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("least squares recovers a straight line exactly") {
  const std::vector<double> x{0, 1, 2, 3, 4};
  auto residual = [&](std::span<const double> p, std::span<double> r) {
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = p[0] + p[1] * x[i] - (1.5 - 0.25 * x[i]);
  };
  const auto res = levenberg_marquardt(residual, {0.0, 0.0}, x.size());
  CHECK(res.converged);
  CHECK(res.x[0] == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(res.x[1] == doctest::Approx(-0.25).epsilon(1e-10));
}

TEST_CASE("least squares rejects underdetermined problems") {
  auto residual = [](std::span<const double>, std::span<double> r) { r[0] = 0.0; };
  CHECK_THROWS_AS(levenberg_marquardt(residual, {0.0, 1.0}, 1), InvalidArgument);
}

TEST_CASE("Lorentzian peak height and area") {
  const double w = 2.8, gam = 0.05, g = 0.02;
  CHECK(lorentzian_kappa(w, w, gam, g) == doctest::Approx(2 * g * g / (units::pi * gam)));
  // Trapezoid over +-400 widths; the tails beyond carry about Gamma/(pi*400 Gamma) of the area.
  const auto s = synthetic_lorentzian(w, gam, g, w - 20.0, w + 20.0, 400001);
  double area = 0.0;
  for (std::size_t i = 1; i < s.data.size(); ++i) {
    area += 0.5 * (s.data.values[i] + s.data.values[i - 1]) * (s.data.hw[i] - s.data.hw[i - 1]);
  }
  CHECK(area / (g * g) == doctest::Approx(1.0 - 2.0 * gam / (units::pi * 40.0)).epsilon(1e-5));
}

TEST_CASE("initial guess reads the peak") {
  const auto s = synthetic_lorentzian(2.8, 0.05, 0.02, 2.5, 3.1, 601);
  const auto guess = lorentzian_initial_guess(s.data);
  CHECK(guess.hw_n == doctest::Approx(2.8).epsilon(1e-3));
  CHECK(guess.hgamma == doctest::Approx(0.05).epsilon(0.02));
  CHECK(guess.hg == doctest::Approx(0.02).epsilon(0.02));
}

TEST_CASE("Lorentzian round trip over random draws") {
  std::mt19937_64 rng(20261016);
  std::uniform_real_distribution<double> w_d(2.5, 3.2), gam_d(0.01, 0.2), g_d(0.001, 0.1);
  int worst_case = 0;
  for (int k = 0; k < 100; ++k) {
    const double w = w_d(rng), gam = gam_d(rng), g = g_d(rng);
    const auto s = synthetic_lorentzian(w, gam, g, w - 6 * gam, w + 6 * gam, 241);
    const auto p = fit_lorentzian(s);
    const double err = std::max({rel(p.hw_n, w), rel(p.hgamma, gam), rel(p.hg, g)});
    if (err > 1e-6) ++worst_case;
    CHECK(err < 1e-6);
  }
  CHECK(worst_case == 0);
}

TEST_CASE("zero dipole gives a zero coupling spectrum") {
  const auto geom = Geometry::from_gap(8.0, 1.0, 2.0);
  auto e = Emitter::from_dipole(2.94, 24.0, 0.0, geom);
  e.dipole = 0.0;
  const auto grid = linspace(2.6, 3.0, 41);
  const auto s = kappa_spectrum(1, grid, geom, kSilver, e);
  for (double v : s.data.values) CHECK(v == 0.0);
  CHECK_THROWS_AS(fit_lorentzian(s), FitFailure);
}

TEST_CASE("coupling spectrum matches the Fermi rate up to 2 pi / gamma_0") {
  const auto geom = Geometry::from_gap(8.0, 1.0, 5.0);
  const auto e = Emitter::from_dipole(2.94, 10.0, 0.0, geom);
  const auto grid = linspace(2.7, 3.2, 11);
  const auto kap = kappa_spectra(3, grid, geom, kSilver, e);
  for (int n = 1; n <= 3; ++n) {
    const auto fermi = fermi_rate_spectrum(n, grid, geom, kSilver);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double g0 = radiative_rate(e.dipole, grid[i], geom.index());
      CHECK(2 * units::pi * kap[n - 1].data.values[i] / g0 ==
            doctest::Approx(fermi.values[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("small-sphere linewidths sit at the Drude damping") {
  const auto geom = Geometry::from_gap(8.0, 1.0, 2.0);
  const auto e = Emitter::from_dipole(2.94, 24.0, 0.0, geom);
  const auto modes = extract_modes(6, linspace(2.0, 3.6, 1601), geom, kSilver, e);
  REQUIRE(modes.size() == 6);
  for (const auto& m : modes) {
    CAPTURE(m.n);
    CHECK(m.hgamma == doctest::Approx(0.051).epsilon(0.10));
    CHECK(m.fit_residual <= 0.02);
    CHECK(m.detuning == doctest::Approx(m.hw_n - 2.94));
    CHECK(m.hg > 0.0);
  }
  // Modes pile up towards the planar surface plasmon as n grows.
  for (int n = 1; n < 6; ++n) CHECK(modes[n].hw_n > modes[n - 1].hw_n);
}

TEST_CASE("single-mode extraction agrees with the multi-mode pass") {
  const auto geom = Geometry::from_gap(8.0, 1.0, 2.0);
  const auto e = Emitter::from_dipole(2.94, 24.0, 0.0, geom);
  const auto grid = linspace(2.0, 3.6, 801);
  const auto one = extract_modes(1, grid, geom, kSilver, e);
  const auto four = extract_modes(4, grid, geom, kSilver, e);
  CHECK(one[0].hw_n == doctest::Approx(four[0].hw_n).epsilon(1e-12));
  CHECK(one[0].hgamma == doctest::Approx(four[0].hgamma).epsilon(1e-12));
  CHECK(one[0].hg == doctest::Approx(four[0].hg).epsilon(1e-12));
}

TEST_CASE("extraction does not depend on the thread count") {
  const auto geom = Geometry::from_gap(8.0, 1.0, 2.0);
  const auto e = Emitter::from_dipole(2.94, 24.0, 0.0, geom);
  const auto grid = linspace(2.0, 3.6, 401);
  set_thread_count(1);
  const auto a = extract_modes(5, grid, geom, kSilver, e);
  set_thread_count(4);
  const auto b = extract_modes(5, grid, geom, kSilver, e);
  set_thread_count(1);
  for (int n = 0; n < 5; ++n) {
    CHECK(a[n].hw_n == b[n].hw_n);
    CHECK(a[n].hgamma == b[n].hgamma);
    CHECK(a[n].hg == b[n].hg);
  }
}

TEST_CASE("large sphere dipole line is visibly non-Lorentzian") {
  const auto geom = Geometry::from_gap(50.0, 1.0, 5.0);
  const auto e = Emitter::from_dipole(2.6, 1.0, 0.0, geom);
  const auto s = kappa_spectrum(1, linspace(1.6, 3.4, 721), geom, kSilver, e);
  const auto p = fit_lorentzian(s);
  CHECK(norm_deviation(s.data, p) > 0.05);
  // Same measure for a small sphere stays far below.
  const auto g8 = Geometry::from_gap(8.0, 1.0, 2.0);
  const auto s8 = kappa_spectrum(1, linspace(2.5, 3.05, 221), g8, kSilver,
                                 Emitter::from_dipole(2.9, 24.0, 0.0, g8));
  CHECK(norm_deviation(s8.data, fit_lorentzian(s8)) < 0.01);
}

TEST_CASE("Fano model without a radiative channel is the Lorentzian rate") {
  const auto ctx = fano_context(30.0);
  const double w = 2.6, gam = 0.05, g = 1e-4;
  for (double x : {2.4, 2.55, 2.6, 2.63, 2.9}) {
    const double lor = g * g * gam / ((x - w) * (x - w) + 0.25 * gam * gam) / ctx.hgamma0(x);
    CHECK(fano_rate_model(x, ctx, w, 0.0, gam, g) == doctest::Approx(lor).epsilon(1e-12));
  }
}

TEST_CASE("Fano dip sits where the asymmetric bracket vanishes") {
  const auto ctx = fano_context(30.0);
  const double w = 2.6, grad = 0.24, g = -4e-5;
  const double alpha = std::sqrt(ctx.hgamma0n_rad(w) * grad) / g;
  const double Q = w / grad;
  const double x = -(1.0 - 0.25 * alpha * alpha) / (2.0 * alpha * Q);
  const double hw_dip = w * (1.0 + x);
  CHECK(std::abs(fano_rate_model(hw_dip, ctx, w, grad, 0.0, g)) < 1e-12);
  // Negative alpha puts the dip on the blue side; flipping g mirrors it.
  CHECK(hw_dip > w);
  const double hw_mirror = w * (1.0 - x);
  CHECK(std::abs(fano_rate_model(hw_mirror, ctx, w, grad, 0.0, -g)) < 1e-12);
}

TEST_CASE("Fano round trip over random draws") {
  const auto ctx = fano_context(30.0);
  const auto grid = linspace(2.0, 3.3, 260);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> w_d(2.45, 2.75), gr_d(0.1, 0.35), g_d(1e-5, 1e-4);
  std::bernoulli_distribution sign_d(0.5);
  for (int k = 0; k < 100; ++k) {
    const double w = w_d(rng), gr = gr_d(rng);
    const double g = (sign_d(rng) ? 1.0 : -1.0) * g_d(rng);
    const auto fit = fit_fano_rate(synthetic_fano(ctx, w, gr, 0.0, g, grid), ctx);
    CAPTURE(k);
    CHECK(rel(fit.mode.hw_n, w) < 1e-6);
    CHECK(rel(fit.mode.hgamma_rad, gr) < 1e-6);
    CHECK(rel(fit.signed_hg, g) < 1e-6);
  }
}

TEST_CASE("lossy Fano round trip recovers the non-radiative width") {
  const auto ctx = fano_context(30.0);
  const auto grid = linspace(2.0, 3.3, 260);
  const double w = 2.6, gr = 0.24, gnr = 0.04, g = -4e-5;
  ModeParams start;
  start.hw_n = w * 1.01;
  start.hgamma_rad = gr * 0.95;
  start.hg = std::abs(g) * 1.03;
  start.fano_ratio = -1.0;
  FanoFitOptions opt{true, false, &start};
  const auto fit = fit_fano_rate(synthetic_fano(ctx, w, gr, gnr, g, grid), ctx, opt);
  CHECK(rel(fit.mode.hw_n, w) < 1e-6);
  CHECK(rel(fit.mode.hgamma_rad, gr) < 1e-6);
  CHECK(rel(fit.mode.hgamma_nr, gnr) < 1e-6);
  CHECK(rel(fit.signed_hg, g) < 1e-6);
}

TEST_CASE("derived Purcell factors obey the yield identity") {
  const auto ctx = fano_context(30.0);
  const auto grid = linspace(2.0, 3.3, 260);
  ModeParams start;
  start.hw_n = 2.6;
  start.hgamma_rad = 0.24;
  start.hg = 4e-5;
  start.fano_ratio = -1.0;
  FanoFitOptions opt{true, true, &start};
  const auto fit = fit_fano_rate(synthetic_fano(ctx, 2.6, 0.24, 0.03, -4e-5, grid), ctx, opt);
  CHECK(fit.mode.hgamma_nr == doctest::Approx(0.03).epsilon(1e-6));
  const double ratio = fit.mode.hgamma_rad / fit.mode.hgamma;
  CHECK(std::abs(fit.purcell - ratio * fit.purcell_rad) <= 1e-10 * fit.purcell);
  CHECK(fit.q_factor == doctest::Approx(2.0 / fit.mode.fano_ratio));
}

TEST_CASE("silver sphere Fano parameters") {
  const auto grid = linspace(2.0, 3.3, 400);
  SUBCASE("h = 30 nm") {
    const auto ctx = fano_context(30.0);
    const auto lossless = fit_fano_rate(fermi_rate_spectrum(1, grid, ctx.geometry, kLossless), ctx);
    CHECK(lossless.q_factor == doctest::Approx(-4.2).epsilon(0.15));
    CHECK(lossless.purcell_rad == doctest::Approx(14.2).epsilon(0.15));
    CHECK(lossless.mode.fit_residual < 0.02);

    const auto lossy_rate = fermi_rate_spectrum(1, grid, ctx.geometry, kSilver);
    FanoFitOptions opt{true, true, &lossless.mode};
    const auto lossy = fit_fano_rate(lossy_rate, ctx, opt);
    CHECK(lossy.mode.hgamma_nr == doctest::Approx(0.040).epsilon(0.25));
    CHECK(lossy.purcell == doctest::Approx(12.2).epsilon(0.15));
    // The second stage may only improve on the lossless parameters.
    CHECK(lossy.mode.fit_residual <= fano_residual(lossy_rate, ctx, lossless.mode));
    opt.freeze_radiative = false;
    const auto free_fit = fit_fano_rate(lossy_rate, ctx, opt);
    CHECK(free_fit.mode.fit_residual <= fano_residual(lossy_rate, ctx, lossless.mode));
  }
  SUBCASE("h = 15 nm") {
    const auto ctx = fano_context(15.0);
    const auto lossless = fit_fano_rate(fermi_rate_spectrum(1, grid, ctx.geometry, kLossless), ctx);
    CHECK(lossless.purcell_rad == doctest::Approx(40.7).epsilon(0.15));
    FanoFitOptions opt{true, true, &lossless.mode};
    const auto lossy = fit_fano_rate(fermi_rate_spectrum(1, grid, ctx.geometry, kSilver), ctx, opt);
    CHECK(lossy.purcell == doctest::Approx(35.1).epsilon(0.15));
  }
}

TEST_CASE("lossy fit requires a lossless pre-fit") {
  const auto ctx = fano_context(30.0);
  const auto s = synthetic_fano(ctx, 2.6, 0.24, 0.0, 4e-5, linspace(2.0, 3.3, 50));
  CHECK_THROWS_AS(fit_fano_rate(s, ctx, FanoFitOptions{true, true, nullptr}), InvalidArgument);
}

TEST_CASE("spectrum CSV round trip") {
  Spectrum s{{1.0, 1.5, 2.0}, {0.1, -2.5e-9, 3.0}};
  std::stringstream io;
  write_spectrum(io, s, "value");
  const auto back = read_spectrum(io);
  CHECK(back.hw == s.hw);
  CHECK(back.values == s.values);
  std::stringstream bad("1.0,2.0\n0.5,1.0\n");
  CHECK_THROWS_AS(read_spectrum(bad), InvalidArgument);
}
