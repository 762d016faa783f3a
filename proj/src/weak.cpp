// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#include "pcqed/weak.hpp"

#include <cmath>

#include "pcqed/errors.hpp"
#include "pcqed/mie.hpp"
#include "pcqed/units.hpp"

namespace pcqed {

namespace {

WeakCouplingReport start(RateMethod method, const Emitter& emitter) {
  if (!(emitter.hgamma0 > 0.0)) throw InvalidArgument("emitter needs a positive intrinsic rate");
  WeakCouplingReport r;
  r.method = method;
  r.hw0 = emitter.hw0;
  r.hgamma0 = emitter.hgamma0;
  r.hgamma_tot = emitter.hgamma0;
  return r;
}

}  // namespace

const char* to_string(RateMethod method) {
  switch (method) {
    case RateMethod::adiabatic: return "adiabatic";
    case RateMethod::fermi: return "fermi";
    case RateMethod::broadened: return "broadened";
    case RateMethod::fano: return "fano";
    case RateMethod::dynamics: return "dynamics";
  }
  return "unknown";
}

double WeakCouplingReport::lifetime_ns() const {
  return units::hbar_ev_s / hgamma_tot * 1e9;
}

WeakCouplingReport adiabatic_rates(std::span<const ModeParams> modes, const Emitter& emitter) {
  auto r = start(RateMethod::adiabatic, emitter);
  for (const auto& m : modes) {
    const double d = emitter.hw0 - m.hw_n;
    const double den = d * d + 0.25 * m.hgamma * m.hgamma;
    const double g2 = m.hg * m.hg;
    r.lamb_shift += g2 * d / den;
    r.n.push_back(m.n);
    r.hgamma_n.push_back(g2 * m.hgamma / den);
    r.hgamma_tot += r.hgamma_n.back();
  }
  return r;
}

std::vector<PurcellEntry> purcell_factors(std::span<const ModeParams> modes,
                                          const Emitter& emitter, double refractive_index) {
  if (!(emitter.hgamma0 > 0.0)) throw InvalidArgument("emitter needs a positive intrinsic rate");
  std::vector<PurcellEntry> out;
  for (const auto& m : modes) {
    PurcellEntry p;
    p.n = m.n;
    const double g2 = m.hg * m.hg;
    p.purcell = 4.0 * g2 / (emitter.hgamma0 * m.hgamma);
    p.quality = m.hw_n / m.hgamma;
    const double d = emitter.hw0 - m.hw_n;
    p.contribution = g2 * m.hgamma / (d * d + 0.25 * m.hgamma * m.hgamma) / emitter.hgamma0;
    if (m.radiative_resolved && m.hgamma_rad > 0.0) {
      p.radiative_resolved = true;
      const double g0rad = radiative_rate(emitter.dipole, m.hw_n, refractive_index);
      p.purcell_rad = 4.0 * g2 / (g0rad * m.hgamma_rad);
      p.purcell_lossy = m.hgamma_rad / m.hgamma * p.purcell_rad;
    }
    out.push_back(p);
  }
  return out;
}

FermiRate fermi_rate(const Geometry& geometry, const Material& material, const Emitter& emitter,
                     int n_max) {
  const double kb = geometry.index() * units::wavenumber(emitter.hw0);
  const auto g = green_rr_scattered(emitter.hw0, geometry, material, n_max);
  return {1.0 + emitter.quantum_yield * 6.0 * units::pi / kb * g.total.imag(), g.converged};
}

WeakCouplingReport broadened_rates(std::span<const ModeParams> modes, const Emitter& emitter) {
  auto r = start(RateMethod::broadened, emitter);
  for (const auto& m : modes) {
    const double d = emitter.hw0 - m.hw_n;
    const double w = emitter.hgamma0 + m.hgamma;
    const double den = d * d + 0.25 * w * w;
    r.lamb_shift += m.hg * m.hg * d / den;
    r.n.push_back(m.n);
    r.hgamma_n.push_back(m.hg * m.hg * w / den);
    r.hgamma_tot += r.hgamma_n.back();
  }
  return r;
}

WeakCouplingReport fano_adiabatic(std::span<const ModeParams> modes, const Emitter& emitter) {
  auto r = start(RateMethod::fano, emitter);
  for (const auto& m : modes) {
    if (!m.fano_resolved) {
      throw IncompleteModesError("mode " + std::to_string(m.n) + " has no Fano ratio");
    }
    const double d = m.hw_n - emitter.hw0;  // Delta_n
    const double a = m.fano_ratio;
    const double den = d * d + 0.25 * m.hgamma * m.hgamma;
    const double g2 = m.hg * m.hg;
    r.lamb_shift -= g2 * ((1.0 - 0.25 * a * a) * d + 0.5 * a * m.hgamma) / den;
    r.n.push_back(m.n);
    r.hgamma_n.push_back(g2 * ((1.0 - 0.25 * a * a) * m.hgamma - 2.0 * a * d) / den);
    r.hgamma_tot += r.hgamma_n.back();
  }
  return r;
}

double fano_dip_energy(const ModeParams& m) {
  if (m.fano_ratio == 0.0) throw InvalidArgument("no Fano dip without a Fano ratio");
  const double a = m.fano_ratio;
  const double q = m.hw_n / m.hgamma;
  const double x = -(1.0 - 0.25 * a * a) / (2.0 * a * q);
  return m.hw_n * (1.0 + x);
}

double fit_decay_rate(std::span<const double> times, std::span<const double> population) {
  if (times.size() != population.size() || times.size() < 2) {
    throw InvalidArgument("decay fit needs at least two (t, p) samples");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(population[i] > 0.0)) throw InvalidArgument("decay fit needs positive populations");
    const double y = std::log(population[i]);
    sx += times[i];
    sy += y;
    sxx += times[i] * times[i];
    sxy += times[i] * y;
  }
  const double n = static_cast<double>(times.size());
  const double den = n * sxx - sx * sx;
  if (!(den > 0.0)) throw InvalidArgument("decay fit needs distinct sample times");
  return -(n * sxy - sx * sy) / den;
}

std::vector<std::pair<std::string, double>> flatten(const WeakCouplingReport& r) {
  std::vector<std::pair<std::string, double>> kv{
      {"hw0_eV", r.hw0},
      {"hgamma0_eV", r.hgamma0},
      {"lamb_shift_eV", r.lamb_shift},
      {"hgamma_tot_eV", r.hgamma_tot},
      {"gamma_ratio", r.ratio()},
      {"lifetime_ns", r.lifetime_ns()},
  };
  for (std::size_t i = 0; i < r.n.size(); ++i) {
    kv.emplace_back("hgamma_" + std::to_string(r.n[i]) + "_eV", r.hgamma_n[i]);
  }
  return kv;
}

}  // namespace pcqed
