// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#include "app/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "pcqed/heff.hpp"
#include "pcqed/weak.hpp"

namespace pcqed::app {

std::vector<ModeParams> extract(const Scenario& s, const Emitter& e) {
  const auto material = s.make_material();
  const auto grid = s.grid_points();
  return stage("coupling", "extract_modes",
               [&] { return extract_modes(s.modes, grid, s.geometry, material, e); });
}

Table modes_table(const std::vector<ModeParams>& modes, const Emitter& e) {
  const auto p = purcell_factors(modes, e);
  Table t;
  t.comments = {"Lorentzian mode parameters (energies and hbar*rates in eV)",
                "fit_residual = RMS/max of the fitted coupling spectrum"};
  std::vector<double> n, hw, gam, g, det, res, fp;
  for (std::size_t k = 0; k < modes.size(); ++k) {
    n.push_back(modes[k].n);
    hw.push_back(modes[k].hw_n);
    gam.push_back(modes[k].hgamma);
    g.push_back(modes[k].hg);
    det.push_back(modes[k].detuning);
    res.push_back(modes[k].fit_residual);
    fp.push_back(p[k].purcell);
  }
  t.add("n", n);
  t.add("hw_n_eV", hw);
  t.add("hgamma_eV", gam);
  t.add("hg_eV", g);
  t.add("detuning_eV", det);
  t.add("fit_residual", res);
  t.add("purcell", fp);
  return t;
}

nlohmann::json modes_json(const std::vector<ModeParams>& modes) {
  auto list = nlohmann::json::array();
  for (const auto& m : modes) {
    list.push_back({{"n", m.n},
                    {"hw_n_eV", m.hw_n},
                    {"hgamma_eV", m.hgamma},
                    {"hg_eV", m.hg},
                    {"detuning_eV", m.detuning},
                    {"fit_residual", m.fit_residual}});
  }
  return list;
}

std::vector<double> two_highest_peaks(std::span<const double> x, std::span<const double> y) {
  const auto peaks = local_maxima(x, y);
  std::vector<std::pair<double, double>> scored;  // (height, position)
  for (double p : peaks) {
    const auto it = std::lower_bound(x.begin(), x.end(), p);
    auto i = static_cast<std::size_t>(it - x.begin());
    if (i == x.size()) --i;
    if (i > 0 && std::abs(x[i - 1] - p) < std::abs(x[i] - p)) --i;
    scored.emplace_back(y[i], p);
  }
  std::sort(scored.begin(), scored.end(), [](auto a, auto b) { return a.first > b.first; });
  std::vector<double> out;
  for (std::size_t k = 0; k < std::min<std::size_t>(2, scored.size()); ++k) {
    out.push_back(scored[k].second);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double dynamics_decay_rate(const std::vector<ModeParams>& modes, const Emitter& e) {
  const auto h = build_standard(modes, e);
  const double lifetime = 1.0 / adiabatic_rates(modes, e).hgamma_tot;
  std::vector<double> t;
  for (int k = 1; k <= 20; ++k) t.push_back(2.0 * lifetime * k / 20.0);
  std::vector<double> p;
  for (const auto& s : evolve(h, excited_emitter(h.dimension()), t)) {
    p.push_back(s.emitter_population());
  }
  return fit_decay_rate(t, p);
}

FanoOrder fano_order(int n, std::span<const double> grid, const Geometry& geometry,
                     const Material& material, const Emitter& emitter, bool lossy) {
  const auto& dp = material.drude_params();
  const auto reference = Material::drude(dp.eps_inf, dp.hw_p, 0.0);
  const FanoModelContext ctx{n, geometry, emitter};
  FanoOrder f;
  f.lossless_rate = stage("coupling", "fermi_rate_spectrum", [&] {
    return fermi_rate_spectrum(n, grid, geometry, reference, emitter.quantum_yield);
  });
  f.lossless = stage("coupling", "fit_fano_rate", [&] { return fit_fano_rate(f.lossless_rate, ctx); });
  if (lossy && dp.hgamma_p > 0.0) {
    f.lossy_rate = stage("coupling", "fermi_rate_spectrum", [&] {
      return fermi_rate_spectrum(n, grid, geometry, material, emitter.quantum_yield);
    });
    const FanoFitOptions opt{true, true, &f.lossless.mode};
    f.lossy = stage("coupling", "fit_fano_rate", [&] { return fit_fano_rate(f.lossy_rate, ctx, opt); });
  }
  return f;
}

nlohmann::json fano_json(const FanoFit& fit) {
  const auto& m = fit.mode;
  nlohmann::json j = {{"hw_n_eV", m.hw_n},
                      {"hgamma_rad_eV", m.hgamma_rad},
                      {"hgamma_nr_eV", m.hgamma_nr},
                      {"hg_signed_eV", fit.signed_hg},
                      {"fano_ratio", m.fano_ratio},
                      {"q_F", fit.q_factor},
                      {"purcell_rad", fit.purcell_rad},
                      {"purcell", fit.purcell},
                      {"fit_residual", m.fit_residual}};
  if (m.fano_ratio != 0.0) j["dip_hw_eV"] = fano_dip_energy(m);
  return j;
}

std::vector<double> model_curve(std::span<const double> grid, const FanoModelContext& ctx,
                                const FanoFit& fit) {
  std::vector<double> v;
  v.reserve(grid.size());
  for (double w : grid) {
    v.push_back(fano_rate_model(w, ctx, fit.mode.hw_n, fit.mode.hgamma_rad, fit.mode.hgamma_nr,
                                fit.signed_hg));
  }
  return v;
}

}  // namespace pcqed::app
