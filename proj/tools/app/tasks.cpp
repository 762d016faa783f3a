// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#include "app/tasks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <thread>

#include "app/pipeline.hpp"
#include "app/verify.hpp"
#include "pcqed/errors.hpp"
#include "pcqed/heff.hpp"
#include "pcqed/lindblad.hpp"
#include "pcqed/mie.hpp"
#include "pcqed/parallel.hpp"
#include "pcqed/units.hpp"
#include "pcqed/weak.hpp"

#ifndef PCQED_VERSION
#define PCQED_VERSION "unknown"
#endif

namespace pcqed::app {

namespace {

using nlohmann::json;

std::string order_tag(int n) { return std::to_string(n); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json emitter_json(const Emitter& e) {
  return {{"hw0_eV", e.hw0},
          {"wavelength_nm", units::energy_to_wavelength(e.hw0)},
          {"d_eg_D", e.dipole},
          {"quantum_yield", e.quantum_yield},
          {"hgamma0_eV", e.hgamma0},
          {"hgamma0_rad_eV", e.hgamma0_rad()},
          {"tau0_ns", units::internal_to_ns(1.0 / e.hgamma0)}};
}

json resolved_json(const Scenario& s) {
  json material;
  if (s.material.model == "drude") {
    material = {{"model", "drude"},
                {"eps_inf", s.material.drude.eps_inf},
                {"hw_p_eV", s.material.drude.hw_p},
                {"hgamma_p_eV", s.material.drude.hgamma_p}};
  } else {
    material = {{"model", "tabulated"}, {"file", s.material.table.string()}};
  }
  return {{"material", material},
          {"geometry",
           {{"R_nm", s.geometry.radius}, {"eps_b", s.geometry.eps_b}, {"h_nm", s.geometry.gap()}}},
          {"emitter", emitter_json(s.make_emitter())},
          {"task", to_string(s.task)},
          {"N", s.modes},
          {"grid", {{"min_eV", s.grid.min}, {"max_eV", s.grid.max}, {"points", s.grid.points}}},
          {"time",
           {{"max_fs", s.time.max > 0 ? units::internal_to_fs(s.time.max) : 0.0},
            {"points", s.time.points}}}};
}

// Default window: five times the slowest relevant scale among the adiabatic decay and the
// plasmon linewidths.
std::vector<double> time_grid(const Scenario& s, const std::vector<ModeParams>& modes,
                              const Emitter& e) {
  double tmax = s.time.max;
  if (!(tmax > 0.0)) {
    double rate = adiabatic_rates(modes, e).hgamma_tot;
    for (const auto& m : modes) rate = std::min(rate, m.hgamma);
    tmax = 5.0 / rate;
  }
  return linspace(0.0, tmax, static_cast<std::size_t>(s.time.points));
}

json spectra_task(const Scenario& s, OutputSet& out) {
  const auto material = s.make_material();
  const auto e = s.make_emitter();
  const auto grid = s.grid_points();
  const auto spectra = stage("coupling", "kappa_spectra",
                             [&] { return kappa_spectra(s.modes, grid, s.geometry, material, e); });
  const int n_max = std::max(60, s.modes);
  std::vector<double> ratio(grid.size());
  std::vector<char> converged(grid.size(), 1);
  stage("mie", "green_rr_scattered", [&] {
    parallel_for(grid.size(), [&](std::size_t i) {
      const auto g = green_rr_scattered(grid[i], s.geometry, material, n_max);
      const double kb = s.geometry.index() * units::wavenumber(grid[i]);
      ratio[i] = 1.0 + e.quantum_yield * 6.0 * units::pi / kb * g.total.imag();
      converged[i] = g.converged ? 1 : 0;
    });
  });

  Table t;
  t.comments = {"coupling spectra hbar|kappa_n|^2 (eV) per mode order and total decay ratio",
                "gamma_ratio = gamma_tot/gamma_0 from the full scattered Green tensor"};
  t.add("hw_eV", grid);
  for (const auto& sp : spectra) t.add("kappa2_" + order_tag(sp.n) + "_eV", sp.data.values);
  t.add("gamma_ratio", ratio);
  out.write_csv("spectra.csv", t);

  json qs = json::array();
  for (int n = 1; n <= s.modes; ++n) {
    try {
      qs.push_back(qs_resonance(n, s.geometry, material));
    } catch (const NoResonanceError&) {
      qs.push_back(nullptr);
    }
  }
  const auto bad = std::count(converged.begin(), converged.end(), 0);
  json side = {{"orders", s.modes},
               {"green_series_orders", n_max},
               {"unconverged_points", bad},
               {"qs_resonances_eV", qs}};
  out.write_json("spectra.json", side);
  return side;
}

json fit_task(const Scenario& s, OutputSet& out) {
  const auto e = s.make_emitter();
  const auto modes = extract(s, e);
  out.write_csv("modes.csv", modes_table(modes, e));
  json side = {{"emitter", emitter_json(e)}, {"modes", modes_json(modes)}};
  out.write_json("modes.json", side);
  double worst = 0.0;
  for (const auto& m : modes) worst = std::max(worst, m.fit_residual);
  return {{"modes", modes.size()}, {"max_fit_residual", worst}};
}

json dressed_task(const Scenario& s, OutputSet& out) {
  const auto material = s.make_material();
  const auto e = s.make_emitter();
  const auto modes = extract(s, e);
  const auto h = stage("heff", "build_standard", [&] { return build_standard(modes, e); });
  const auto d = stage("heff", "eigendecompose", [&] { return eigendecompose(h); });
  const auto grid = s.grid_points();

  Table states;
  states.comments = {"dressed states of the effective Hamiltonian, sorted by energy",
                     "emitter_weight = |m_0|^2 (emitter component of the right eigenvector)"};
  std::vector<double> idx, hw, width, weight;
  const Eigen::VectorXcd m0 = d.weights();
  for (int m = 0; m < d.size(); ++m) {
    idx.push_back(m);
    hw.push_back(d.energy(m));
    width.push_back(d.width(m));
    weight.push_back(std::norm(m0[m]));
  }
  states.add("index", idx);
  states.add("hw_eV", hw);
  states.add("width_eV", width);
  states.add("emitter_weight", weight);
  out.write_csv("dressed.csv", states);

  const auto pol = stage("heff", "polarization_spectrum", [&] { return polarization_spectrum(d, grid); });
  Table p;
  p.comments = {"polarization spectrum P(w) for the emitter initially excited (eV^-2)"};
  p.add("hw_eV", grid);
  p.add("P_per_eV2", pol.spectrum.values);
  out.write_csv("polarization.csv", p);

  json side = {{"states", d.size()},
               {"splitting_eV", dominant_splitting(d)},
               {"sum_rule", polarization_sum_rule(d)}};
  const auto pk = two_highest_peaks(grid, pol.spectrum.values);
  side["polarization_peaks_eV"] = pk;
  side["polarization_peak_separation_eV"] = pk.size() == 2 ? json(pk[1] - pk[0]) : json(nullptr);

  try {
    const auto r = radiated_spectrum(h, grid, s.geometry, material, e);
    Table rt;
    rt.comments = {"radiated power p_rad (eV^-1, per unit hbar*w), P(w) and LSP_1 population"};
    rt.add("hw_eV", r.hw);
    rt.add("p_rad", r.p_rad);
    rt.add("P_per_eV2", r.polarization);
    rt.add("c1_population_per_eV2", r.c1_population);
    out.write_csv("radiated.csv", rt);
    const auto top = std::max_element(r.c1_population.begin(), r.c1_population.end());
    side["c1_max_eV"] = r.hw[static_cast<std::size_t>(top - r.c1_population.begin())];
  } catch (const SingularityError& err) {
    side["radiated_skipped"] = err.what();
  }
  out.write_json("dressed.json", side);
  return side;
}

json dynamics_task(const Scenario& s, OutputSet& out) {
  const auto e = s.make_emitter();
  const auto modes = extract(s, e);
  const auto h = stage("heff", "build_standard", [&] { return build_standard(modes, e); });
  const auto t = time_grid(s, modes, e);
  const auto states = stage("heff", "evolve", [&] { return evolve(h, excited_emitter(h.dimension()), t); });

  Table tab;
  tab.comments = {"single-excitation amplitudes, emitter initially excited",
                  "p_lsp_n = |C_n(t)|^2; norm = total population left in the excited sector"};
  std::vector<double> tfs, tns, pe, plsp, norm;
  std::vector<std::vector<double>> per(modes.size());
  std::vector<double> fit_t, fit_p;
  for (const auto& st : states) {
    tfs.push_back(units::internal_to_fs(st.t));
    tns.push_back(units::internal_to_ns(st.t));
    pe.push_back(st.emitter_population());
    norm.push_back(st.norm());
    plsp.push_back(st.norm() - st.emitter_population());
    for (std::size_t k = 0; k < modes.size(); ++k) per[k].push_back(std::norm(st.amplitude[k + 1]));
    if (st.t > 0.0 && st.emitter_population() > 1e-300) {
      fit_t.push_back(st.t);
      fit_p.push_back(st.emitter_population());
    }
  }
  tab.add("t_fs", tfs);
  tab.add("t_ns", tns);
  tab.add("p_e", pe);
  tab.add("p_lsp_total", plsp);
  tab.add("norm", norm);
  for (std::size_t k = 0; k < modes.size(); ++k) tab.add("p_lsp_" + order_tag(modes[k].n), per[k]);
  out.write_csv("populations.csv", tab);

  json side = {{"points", t.size()}, {"t_max_fs", units::internal_to_fs(t.back())}};
  if (fit_t.size() >= 2) {
    const double rate = fit_decay_rate(fit_t, fit_p);
    side["decay_rate_fit_eV"] = rate;
    side["gamma_ratio_fit"] = rate / e.hgamma0;
    side["lifetime_fit_ns"] = units::internal_to_ns(1.0 / rate);
  }
  out.write_json("dynamics.json", side);
  return side;
}

json report_json(const WeakCouplingReport& r) {
  return {{"method", to_string(r.method)},
          {"gamma_ratio", r.ratio()},
          {"hgamma_tot_eV", r.hgamma_tot},
          {"lamb_shift_eV", r.lamb_shift},
          {"lifetime_ns", r.lifetime_ns()}};
}

json rates_task(const Scenario& s, OutputSet& out) {
  const auto material = s.make_material();
  const auto e = s.make_emitter();
  const auto modes = extract(s, e);
  const auto adiabatic = adiabatic_rates(modes, e);
  const auto broadened = broadened_rates(modes, e);
  const auto fermi = stage("weak", "fermi_rate",
                           [&] { return fermi_rate(s.geometry, material, e, std::max(60, s.modes)); });
  const double dyn_rate = stage("heff", "evolve", [&] { return dynamics_decay_rate(modes, e); });

  const auto purcell = purcell_factors(modes, e, s.geometry.index());
  Table t;
  t.comments = {"per-mode weak-coupling quantities at the emitter energy",
                "purcell = 4 g^2/(gamma0 Gamma); contribution = detuned gamma_n/gamma0"};
  std::vector<double> n, hw, fp, q, contrib, rate;
  for (std::size_t k = 0; k < modes.size(); ++k) {
    n.push_back(modes[k].n);
    hw.push_back(modes[k].hw_n);
    fp.push_back(purcell[k].purcell);
    q.push_back(purcell[k].quality);
    contrib.push_back(purcell[k].contribution);
    rate.push_back(adiabatic.hgamma_n[k]);
  }
  t.add("n", n);
  t.add("hw_n_eV", hw);
  t.add("purcell", fp);
  t.add("quality", q);
  t.add("contribution", contrib);
  t.add("hgamma_n_eV", rate);
  out.write_csv("purcell.csv", t);

  const double fr = fermi.ratio, ad = adiabatic.ratio(), dy = dyn_rate / e.hgamma0;
  auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
  json side = {{"emitter", emitter_json(e)},
               {"adiabatic", report_json(adiabatic)},
               {"broadened", report_json(broadened)},
               {"fermi", {{"gamma_ratio", fr}, {"converged", fermi.converged}}},
               {"dynamics",
                {{"gamma_ratio", dy},
                 {"lifetime_ns", units::internal_to_ns(1.0 / dyn_rate)}}},
               {"pairwise_deviation",
                {{"fermi_adiabatic", rel(ad, fr)},
                 {"fermi_dynamics", rel(dy, fr)},
                 {"adiabatic_dynamics", rel(dy, ad)}}}};
  out.write_json("rates.json", side);
  return side;
}

json fano_task(const Scenario& s, OutputSet& out) {
  const auto material = s.make_material();
  const auto e = s.make_emitter();
  const auto grid = s.grid_points();
  Table t;
  t.comments = {"decay rate into LSP_n normalized to gamma_0 (Fermi golden rule) and Fano fits",
                "lossless columns use the same Drude metal with Gamma_p = 0"};
  t.add("hw_eV", grid);
  std::vector<double> lambda;
  for (double w : grid) lambda.push_back(units::energy_to_wavelength(w));
  t.add("lambda_nm", lambda);
  json orders = json::array();
  for (int n : s.fano.orders) {
    const auto f = fano_order(n, grid, s.geometry, material, e, s.fano.lossy);
    const FanoModelContext ctx{n, s.geometry, e};
    t.add("rate_lossless_" + order_tag(n), f.lossless_rate.values);
    t.add("fit_lossless_" + order_tag(n), model_curve(grid, ctx, f.lossless));
    json o = {{"n", n}, {"lossless", fano_json(f.lossless)}};
    if (f.lossy) {
      t.add("rate_lossy_" + order_tag(n), f.lossy_rate.values);
      t.add("fit_lossy_" + order_tag(n), model_curve(grid, ctx, *f.lossy));
      o["lossy"] = fano_json(*f.lossy);
    }
    orders.push_back(o);
  }
  out.write_csv("fano.csv", t);
  json side = {{"emitter", emitter_json(e)}, {"orders", orders}};
  out.write_json("fano.json", side);
  return side;
}

json lindblad_task(const Scenario& s, OutputSet& out) {
  const auto e = s.make_emitter();
  const auto kind = s.lindblad_kind;
  std::vector<ModeParams> modes;
  if (kind == MasterKind::standard) {
    modes = extract(s, e);
  } else {
    const auto material = s.make_material();
    const auto grid = s.grid_points();
    for (int n = 1; n <= s.modes; ++n) {
      const auto f = fano_order(n, grid, s.geometry, material, e, kind == MasterKind::fano_full);
      modes.push_back(f.lossy ? f.lossy->mode : f.lossless.mode);
    }
    modes = stage("coupling", "fano_at_emitter", [&] { return fano_at_emitter(modes, s.geometry, e); });
  }
  const auto me = stage("lindblad", "build_master_equation",
                        [&] { return build_master_equation(kind, modes, e); });
  const auto heff = effective_hamiltonian_from_lindblad(me);
  const auto direct = stage("heff", "build", [&] {
    switch (kind) {
      case MasterKind::fano_radiative: return build_fano(modes, e, FanoVariant::radiative_only);
      case MasterKind::fano_full: return build_fano(modes, e, FanoVariant::general);
      default: return build_standard(modes, e);
    }
  });
  const double matrix_dev = (heff.matrix - direct.matrix).cwiseAbs().maxCoeff();
  const auto t = time_grid(s, modes, e);
  const int d = me.space.dimension();
  const auto rho0 = sector_density(excited_emitter(d - 1));

  // Explicit integration needs ~ |L| t_max steps; beyond that the spectral route is exact and
  // far cheaper.
  double scale = 0.0;
  for (Eigen::Index k = 0; k < me.liouvillian.outerSize(); ++k) {
    for (Eigen::SparseMatrix<cplx>::InnerIterator it(me.liouvillian, k); it; ++it) {
      scale = std::max(scale, std::abs(it.value()));
    }
  }
  std::string route = "dopri5";
  auto t0 = std::chrono::steady_clock::now();
  std::vector<DensitySnapshot> rho;
  if (scale * t.back() > 2e5) {
    route = "spectral";
  } else {
    try {
      rho = evolve_master(me.liouvillian, rho0, t);
    } catch (const StiffnessError&) {
      route = "spectral";
    }
  }
  if (route == "spectral") {
    rho = stage("lindblad", "evolve_master_spectral",
                [&] { return evolve_master_spectral(me.liouvillian, rho0, t); });
  }
  const double t_lindblad = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  const auto amp = stage("heff", "evolve", [&] { return evolve(heff, excited_emitter(d - 1), t); });
  const double t_heff = seconds_since(t0);

  Table tab;
  tab.comments = {std::string("Lindblad evolution, kind ") + to_string(kind) +
                      ", emitter initially excited",
                  "deviation = max |rho_sector - psi psi^dag| against the effective Hamiltonian"};
  std::vector<double> tfs, pg, pe, plsp, tr, mineig, heff_pe, dev;
  double worst_dev = 0.0, worst_trace = 0.0, worst_eig = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const auto& r = rho[k];
    const Eigen::MatrixXcd sector = r.rho.bottomRightCorner(d - 1, d - 1);
    const Eigen::MatrixXcd ref = amp[k].amplitude * amp[k].amplitude.adjoint();
    const double dv = (sector - ref).cwiseAbs().maxCoeff();
    tfs.push_back(units::internal_to_fs(t[k]));
    pg.push_back(r.population(StateSpace::ground));
    pe.push_back(r.population(StateSpace::excited));
    plsp.push_back(r.trace() - pg.back() - pe.back());
    tr.push_back(r.trace());
    mineig.push_back(r.min_eigenvalue());
    heff_pe.push_back(amp[k].emitter_population());
    dev.push_back(dv);
    worst_dev = std::max(worst_dev, dv);
    worst_trace = std::max(worst_trace, std::abs(r.trace() - 1.0));
    worst_eig = std::min(worst_eig, mineig.back());
  }
  tab.add("t_fs", tfs);
  tab.add("p_ground", pg);
  tab.add("p_e", pe);
  tab.add("p_lsp_total", plsp);
  tab.add("trace", tr);
  tab.add("min_eigenvalue", mineig);
  tab.add("heff_p_e", heff_pe);
  tab.add("deviation", dev);
  out.write_csv("lindblad.csv", tab);

  json channels = json::array();
  for (const auto& c : me.dissipators.channels) channels.push_back(c.label);
  json side = {{"kind", to_string(kind)},
               {"route", route},
               {"channels", channels},
               {"lindblad_dimension", d * d},
               {"heff_dimension", d - 1},
               {"heff_matrix_deviation", matrix_dev},
               {"max_population_deviation", worst_dev},
               {"max_trace_error", worst_trace},
               {"min_eigenvalue", worst_eig},
               {"runtime_lindblad_s", t_lindblad},
               {"runtime_heff_s", t_heff},
               {"runtime_ratio", t_heff > 0 ? t_lindblad / t_heff : 0.0}};
  out.write_json("lindblad.json", side);
  return side;
}

void require_drude(const Scenario& s) {
  if (s.material.model != "drude") {
    throw SchemaError("material.model", std::string(to_string(s.task)) +
                                            " needs a Drude material (lossless reference)");
  }
}

}  // namespace

json run_task(const Scenario& s, OutputSet& out) {
  switch (s.task) {
    case Task::spectra: return spectra_task(s, out);
    case Task::fit: return fit_task(s, out);
    case Task::dressed: return dressed_task(s, out);
    case Task::dynamics: return dynamics_task(s, out);
    case Task::rates: return rates_task(s, out);
    case Task::fano: require_drude(s); return fano_task(s, out);
    case Task::lindblad:
      if (s.lindblad_kind != MasterKind::standard) require_drude(s);
      return lindblad_task(s, out);
    case Task::figure_suite: require_drude(s); return run_figure_suite(s, out);
  }
  return {};
}

int run_scenario(const std::filesystem::path& config, const RunOptions& options,
                 std::ostream& log) {
  Scenario s;
  try {
    s = load_scenario(config);
  } catch (const SchemaError& e) {
    log << "error: invalid scenario: " << e.what() << "\n";
    return 2;
  }
  const auto out_dir = options.out_dir.empty() ? s.output_dir : options.out_dir;
  const int threads = options.threads >= 0 ? options.threads : s.threads;
  set_thread_count(threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency()));
  try {
    OutputSet out(out_dir);
    const auto t0 = std::chrono::steady_clock::now();
    json summary = run_task(s, out);
    json manifest = {{"tool", "plasmon-cqed"},
                     {"version", PCQED_VERSION},
                     {"config", config.string()},
                     {"scenario", s.source},
                     {"resolved", resolved_json(s)},
                     {"threads", thread_count()},
                     {"summary", summary}};
    if (s.task == Task::figure_suite) {
      manifest["assumptions"] = {"fig2 sphere radius R = " + std::to_string(s.figures.fig2_radius) +
                                 " nm (assumed; set run.figure_suite.fig2_R to change)"};
    }
    bool verified = true;
    if (options.verify) {
      const auto checks = run_verification(s);
      json list = json::array();
      for (const auto& c : checks) {
        list.push_back(to_json(c));
        if (!c.pass) {
          verified = false;
          log << "verify FAIL " << c.name << ": " << c.value << " (tolerance " << c.tolerance
              << ")\n";
        }
      }
      out.write_json("verify.json", {{"passed", verified}, {"checks", list}});
      manifest["verify"] = {{"passed", verified}, {"checks", checks.size()}};
    }
    manifest["wall_clock_s"] = seconds_since(t0);
    manifest["files"] = out.file_list();
    out.write_json("manifest.json", manifest);
    if (!verified) {
      log << "error: verification failed; outputs discarded\n";
      return 3;
    }
    out.commit();
    log << to_string(s.task) << ": wrote " << manifest["files"].size() + 1 << " files to "
        << out_dir.string() << "\n";
    return 0;
  } catch (const SchemaError& e) {
    log << "error: invalid scenario: " << e.what() << "\n";
    return 2;
  } catch (const TaskFailure& e) {
    log << "error: numerical failure in " << e.what() << "\n";
    return 3;
  } catch (const pcqed::Error& e) {
    log << "error: numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace pcqed::app
