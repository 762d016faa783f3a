// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#include "pcqed/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "pcqed/errors.hpp"
#include "pcqed/lm.hpp"
#include "pcqed/mie.hpp"
#include "pcqed/parallel.hpp"
#include "pcqed/units.hpp"

namespace pcqed {

namespace {

constexpr double kPi = units::pi;

double max_value(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double relative_rms(const std::vector<double>& model, const std::vector<double>& data) {
  double s = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) s += (model[i] - data[i]) * (model[i] - data[i]);
  const double scale = max_value(data);
  return scale > 0.0 ? std::sqrt(s / data.size()) / scale : std::sqrt(s / data.size());
}

// Linear interpolation of the abscissa where v crosses `level` between samples i and j.
double crossing(const Spectrum& s, std::size_t i, std::size_t j, double level) {
  const double a = s.values[i], b = s.values[j];
  if (a == b) return s.hw[i];
  return s.hw[i] + (level - a) / (b - a) * (s.hw[j] - s.hw[i]);
}

}  // namespace

void Spectrum::validate() const {
  if (hw.size() != values.size()) throw InvalidArgument("spectrum columns differ in length");
  if (hw.size() < 2) throw InvalidArgument("spectrum needs at least 2 points");
  for (std::size_t i = 1; i < hw.size(); ++i) {
    if (!(hw[i] > hw[i - 1])) throw InvalidArgument("spectrum grid must be strictly ascending");
  }
}

std::vector<double> linspace(double lo, double hi, std::size_t points) {
  if (points < 2) throw InvalidArgument("linspace needs at least 2 points");
  std::vector<double> v(points);
  for (std::size_t i = 0; i < points; ++i) {
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  v.back() = hi;
  return v;
}

std::vector<CouplingSpectrum> kappa_spectra(int nmax, std::span<const double> grid,
                                            const Geometry& geometry, const Material& material,
                                            const Emitter& emitter) {
  if (nmax < 1) throw InvalidArgument("mode count must be >= 1");
  const double dd = units::dipole_energy_scale(emitter.dipole);
  std::vector<CouplingSpectrum> out(nmax);
  for (int n = 1; n <= nmax; ++n) {
    out[n - 1].n = n;
    out[n - 1].data.hw.assign(grid.begin(), grid.end());
    out[n - 1].data.values.assign(grid.size(), 0.0);
  }
  parallel_for(grid.size(), [&](std::size_t i) {
    const double hw = grid[i];
    const double k0 = units::wavenumber(hw);
    const auto g = green_rr_scattered(hw, geometry, material, nmax);
    for (int n = 1; n <= nmax; ++n) {
      // Tiny negative values can only come from rounding; the physical quantity is >= 0.
      out[n - 1].data.values[i] = std::max(0.0, 4.0 * k0 * k0 * dd * g.terms[n - 1].imag());
    }
  });
  return out;
}

CouplingSpectrum kappa_spectrum(int n, std::span<const double> grid, const Geometry& geometry,
                                const Material& material, const Emitter& emitter) {
  auto all = kappa_spectra(n, grid, geometry, material, emitter);
  return std::move(all.back());
}

double lorentzian_kappa(double hw, double hw_n, double hgamma, double hg) {
  const double dw = hw - hw_n;
  return hgamma / (2.0 * kPi) * hg * hg / (dw * dw + 0.25 * hgamma * hgamma);
}

LorentzianGuess lorentzian_initial_guess(const Spectrum& s) {
  s.validate();
  const auto it = std::max_element(s.values.begin(), s.values.end());
  const std::size_t k = static_cast<std::size_t>(it - s.values.begin());
  const double peak = *it;
  if (!(peak > 0.0)) throw FitFailure("spectrum has no positive peak", {}, 0.0);
  const double half = 0.5 * peak;
  double left = s.hw.front();
  double right = s.hw.back();
  for (std::size_t i = k; i > 0; --i) {
    if (s.values[i - 1] < half) {
      left = crossing(s, i - 1, i, half);
      break;
    }
  }
  for (std::size_t i = k; i + 1 < s.size(); ++i) {
    if (s.values[i + 1] < half) {
      right = crossing(s, i, i + 1, half);
      break;
    }
  }
  double fwhm = right - left;
  if (!(fwhm > 0.0)) fwhm = s.hw[1] - s.hw[0];
  // Peak of (Gamma/2pi) g^2 / (Gamma/2)^2 is 2 g^2/(pi Gamma).
  return {s.hw[k], fwhm, std::sqrt(0.5 * kPi * fwhm * peak)};
}

ModeParams fit_lorentzian(const CouplingSpectrum& spectrum) {
  const Spectrum& s = spectrum.data;
  const auto guess = lorentzian_initial_guess(s);
  const double scale = max_value(s.values);
  const std::size_t m = s.size();

  auto residual = [&](std::span<const double> p, std::span<double> r) {
    const double w = std::exp(p[0]), gam = std::exp(p[1]), g = std::exp(p[2]);
    for (std::size_t i = 0; i < m; ++i) {
      r[i] = (lorentzian_kappa(s.hw[i], w, gam, g) - s.values[i]) / scale;
    }
  };
  const auto res = levenberg_marquardt(
      residual, {std::log(guess.hw_n), std::log(guess.hgamma), std::log(guess.hg)}, m);
  std::vector<double> best{std::exp(res.x[0]), std::exp(res.x[1]), std::exp(res.x[2])};
  if (!res.converged) {
    throw FitFailure("Lorentzian fit for order " + std::to_string(spectrum.n) +
                         " did not converge in 200 iterations",
                     best, res.cost);
  }
  ModeParams p;
  p.n = spectrum.n;
  p.hw_n = best[0];
  p.hgamma = best[1];
  p.hg = best[2];
  std::vector<double> model(m);
  for (std::size_t i = 0; i < m; ++i) model[i] = lorentzian_kappa(s.hw[i], p.hw_n, p.hgamma, p.hg);
  p.fit_residual = relative_rms(model, s.values);
  return p;
}

std::vector<ModeParams> extract_modes(int N, std::span<const double> grid,
                                      const Geometry& geometry, const Material& material,
                                      const Emitter& emitter) {
  if (N < 1) throw InvalidArgument("mode count must be >= 1");
  if (grid.size() < 2) throw InvalidArgument("frequency grid needs at least 2 points");
  const auto spectra = kappa_spectra(N, grid, geometry, material, emitter);

  std::vector<ModeParams> modes(N);
  std::vector<std::string> failures(N);
  parallel_for(static_cast<std::size_t>(N), [&](std::size_t idx) {
    const int n = static_cast<int>(idx) + 1;
    try {
      CouplingSpectrum window{n, {}};
      double lo = grid.front(), hi = grid.back();
      if (material.is_drude()) {
        const auto qs = qs_mode_params(n, geometry, material, emitter);
        lo = std::max(lo, qs.hw_n - 5.0 * qs.hgamma);
        hi = std::min(hi, qs.hw_n + 5.0 * qs.hgamma);
      }
      const auto& src = spectra[idx].data;
      for (std::size_t i = 0; i < src.size(); ++i) {
        if (src.hw[i] >= lo && src.hw[i] <= hi) {
          window.data.hw.push_back(src.hw[i]);
          window.data.values.push_back(src.values[i]);
        }
      }
      if (window.data.size() < 8) {
        throw FitFailure("fewer than 8 grid points in the fit window", {}, 0.0);
      }
      auto p = fit_lorentzian(window);
      p.detuning = p.hw_n - emitter.hw0;
      modes[idx] = p;
    } catch (const Error& e) {
      failures[idx] = "mode " + std::to_string(n) + ": " + e.what();
    }
  });
  std::string msg;
  for (const auto& f : failures) {
    if (!f.empty()) msg += (msg.empty() ? "" : "; ") + f;
  }
  if (!msg.empty()) throw FitFailure(msg, {}, 0.0);
  return modes;
}

Spectrum fermi_rate_spectrum(int n, std::span<const double> grid, const Geometry& geometry,
                             const Material& material, double quantum_yield) {
  Spectrum s;
  s.hw.assign(grid.begin(), grid.end());
  s.values.assign(grid.size(), 0.0);
  parallel_for(grid.size(), [&](std::size_t i) {
    const double kb = geometry.index() * units::wavenumber(grid[i]);
    const auto g = green_rr_scattered(grid[i], geometry, material, n);
    s.values[i] = quantum_yield * 6.0 * kPi / kb * g.terms[n - 1].imag();
  });
  return s;
}

double FanoModelContext::hgamma0(double hw) const {
  return radiative_rate(emitter.dipole, hw, geometry.index()) / emitter.quantum_yield;
}

double FanoModelContext::hgamma0n_rad(double hw) const {
  const double x = geometry.index() * units::wavenumber(hw) * geometry.distance;
  return radiative_rate(emitter.dipole, hw, geometry.index()) * multipole_fraction(n, x);
}

double fano_rate_model(double hw, const FanoModelContext& ctx, double hw_n, double hgamma_rad,
                       double hgamma_nr, double hg) {
  const double gam = hgamma_rad + hgamma_nr;
  const double alpha = std::sqrt(ctx.hgamma0n_rad(hw_n) * hgamma_rad) / hg;
  const double F = 4.0 * hg * hg / (ctx.hgamma0(hw) * gam);
  const double Q = hw_n / gam;
  const double x = (hw - hw_n) / hw_n;
  return F * (1.0 - 0.25 * alpha * alpha + 2.0 * alpha * Q * x) / (1.0 + 4.0 * Q * Q * x * x);
}

namespace {

// Iterates that wander off to absurd resonance energies are rejected by returning NaN
// residuals, which the optimizer treats as an infinitely worse step.
bool fill_rejected(double hw_n, std::span<double> r) {
  if (std::isfinite(hw_n) && hw_n > 1e-3 && hw_n < 1e3) return false;
  std::fill(r.begin(), r.end(), std::numeric_limits<double>::quiet_NaN());
  return true;
}

FanoFit make_fano_fit(const Spectrum& rate, const FanoModelContext& ctx, double hw_n,
                      double hgamma_rad, double hgamma_nr, double hg) {
  FanoFit f;
  ModeParams& p = f.mode;
  p.n = ctx.n;
  p.hw_n = hw_n;
  p.hgamma_rad = hgamma_rad;
  p.hgamma_nr = hgamma_nr;
  p.hgamma = hgamma_rad + hgamma_nr;
  p.hg = std::abs(hg);
  p.hgamma0n_rad = ctx.hgamma0n_rad(hw_n);
  p.fano_ratio = std::sqrt(p.hgamma0n_rad * hgamma_rad) / hg;
  p.radiative_resolved = true;
  p.fano_resolved = true;
  f.signed_hg = hg;
  f.q_factor = 2.0 / p.fano_ratio;
  const double g0rad = radiative_rate(ctx.emitter.dipole, hw_n, ctx.geometry.index());
  f.purcell_rad = 4.0 * hg * hg / (g0rad * hgamma_rad);
  f.purcell = hgamma_rad / p.hgamma * f.purcell_rad;
  std::vector<double> model(rate.size());
  double s = 0.0;
  for (std::size_t i = 0; i < rate.size(); ++i) {
    model[i] = fano_rate_model(rate.hw[i], ctx, hw_n, hgamma_rad, hgamma_nr, hg);
    s += (model[i] - rate.values[i]) * (model[i] - rate.values[i]);
  }
  f.rms = std::sqrt(s / rate.size());
  p.fit_residual = relative_rms(model, rate.values);
  return f;
}

}  // namespace

double signed_coupling(const ModeParams& m) { return m.fano_ratio < 0.0 ? -m.hg : m.hg; }

std::vector<ModeParams> fano_at_emitter(std::span<const ModeParams> modes,
                                        const Geometry& geometry, const Emitter& emitter) {
  std::vector<ModeParams> out(modes.begin(), modes.end());
  for (auto& m : out) {
    if (!m.fano_resolved) {
      throw IncompleteModesError("mode " + std::to_string(m.n) + " has no Fano ratio");
    }
    const FanoModelContext ctx{m.n, geometry, emitter};
    m.hgamma0n_rad = ctx.hgamma0n_rad(emitter.hw0);
    const double mag = m.hg > 0.0 ? std::sqrt(m.hgamma0n_rad * m.hgamma_rad) / m.hg : 0.0;
    m.fano_ratio = m.fano_ratio < 0.0 ? -mag : mag;
    m.detuning = m.hw_n - emitter.hw0;
  }
  return out;
}

double fano_residual(const Spectrum& rate, const FanoModelContext& ctx, const ModeParams& mode) {
  std::vector<double> model(rate.size());
  for (std::size_t i = 0; i < rate.size(); ++i) {
    model[i] = fano_rate_model(rate.hw[i], ctx, mode.hw_n, mode.hgamma_rad, mode.hgamma_nr,
                               signed_coupling(mode));
  }
  return relative_rms(model, rate.values);
}

FanoFit fit_fano_rate(const Spectrum& rate, const FanoModelContext& ctx,
                      const FanoFitOptions& options) {
  rate.validate();
  const double scale = max_value(rate.values);
  if (!(scale > 0.0)) throw FitFailure("rate spectrum is identically zero", {}, 0.0);
  const std::size_t m = rate.size();

  if (!options.lossy) {
    // Unknowns: log w_n, log Gamma^rad, signed g. Both signs of g are tried since the
    // orientation of the asymmetry is decided by it.
    Spectrum pos = rate;
    for (double& v : pos.values) v = std::max(v, 0.0);
    const auto guess = lorentzian_initial_guess(pos);
    const double peak = max_value(rate.values);
    const double g_mag = std::sqrt(0.25 * peak * ctx.hgamma0(guess.hw_n) * guess.hgamma);

    auto residual = [&](std::span<const double> p, std::span<double> r) {
      const double w = std::exp(p[0]), gr = std::exp(p[1]), g = p[2];
      if (fill_rejected(w, r)) return;
      for (std::size_t i = 0; i < m; ++i) {
        r[i] = (fano_rate_model(rate.hw[i], ctx, w, gr, 0.0, g) - rate.values[i]) / scale;
      }
    };
    LMResult best;
    best.cost = std::numeric_limits<double>::infinity();
    for (double sign : {1.0, -1.0}) {
      const auto res = levenberg_marquardt(
          residual, {std::log(guess.hw_n), std::log(guess.hgamma), sign * g_mag}, m);
      if (res.converged && res.cost < best.cost) best = res;
    }
    if (!std::isfinite(best.cost)) throw FitFailure("lossless Fano fit did not converge", {}, 0.0);
    return make_fano_fit(rate, ctx, std::exp(best.x[0]), std::exp(best.x[1]), 0.0, best.x[2]);
  }

  if (!options.frozen) throw InvalidArgument("lossy Fano fit needs a lossless pre-fit");
  const ModeParams& f0 = *options.frozen;
  const double g0 = signed_coupling(f0);
  const FanoFit baseline = make_fano_fit(rate, ctx, f0.hw_n, f0.hgamma_rad, 0.0, g0);

  LMResult best;
  best.cost = std::numeric_limits<double>::infinity();
  if (options.freeze_radiative) {
    auto residual = [&](std::span<const double> p, std::span<double> r) {
      const double gnr = std::exp(p[0]);
      for (std::size_t i = 0; i < m; ++i) {
        r[i] = (fano_rate_model(rate.hw[i], ctx, f0.hw_n, f0.hgamma_rad, gnr, g0) -
                rate.values[i]) / scale;
      }
    };
    for (double start : {0.1, 0.3, 1.0}) {
      const auto res = levenberg_marquardt(residual, {std::log(start * f0.hgamma_rad)}, m);
      if (res.converged && res.cost < best.cost) best = res;
    }
    if (std::isfinite(best.cost)) {
      auto fit = make_fano_fit(rate, ctx, f0.hw_n, f0.hgamma_rad, std::exp(best.x[0]), g0);
      if (fit.rms <= baseline.rms) return fit;
    }
    return baseline;
  }

  auto residual = [&](std::span<const double> p, std::span<double> r) {
    const double w = std::exp(p[0]), gr = std::exp(p[1]), gnr = std::exp(p[2]), g = p[3];
    if (fill_rejected(w, r)) return;
    for (std::size_t i = 0; i < m; ++i) {
      r[i] = (fano_rate_model(rate.hw[i], ctx, w, gr, gnr, g) - rate.values[i]) / scale;
    }
  };
  for (double start : {0.1, 0.3, 1.0}) {
    const auto res = levenberg_marquardt(
        residual,
        {std::log(f0.hw_n), std::log(f0.hgamma_rad), std::log(start * f0.hgamma_rad), g0}, m);
    if (res.converged && res.cost < best.cost) best = res;
  }
  if (std::isfinite(best.cost)) {
    auto fit = make_fano_fit(rate, ctx, std::exp(best.x[0]), std::exp(best.x[1]),
                             std::exp(best.x[2]), best.x[3]);
    if (fit.rms <= baseline.rms) return fit;
  }
  return baseline;
}

void write_spectrum(std::ostream& out, const Spectrum& s, const char* value_header) {
  out << "# hw_eV," << value_header << '\n';
  out.precision(17);
  for (std::size_t i = 0; i < s.size(); ++i) out << s.hw[i] << ',' << s.values[i] << '\n';
}

Spectrum read_spectrum(std::istream& in) {
  Spectrum s;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double w = 0.0, v = 0.0;
    if (!(ss >> w >> v)) throw InvalidArgument("spectrum line needs 2 numeric columns: " + line);
    s.hw.push_back(w);
    s.values.push_back(v);
  }
  s.validate();
  return s;
}

}  // namespace pcqed
