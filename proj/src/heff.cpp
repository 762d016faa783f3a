// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#include "pcqed/heff.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numeric>
#include <string>

#include "pcqed/errors.hpp"
#include "pcqed/mie.hpp"
#include "pcqed/parallel.hpp"
#include "pcqed/units.hpp"

namespace pcqed {

namespace {

constexpr cplx kI{0.0, 1.0};

void check_modes(std::span<const ModeParams> modes) {
  if (modes.empty()) throw InvalidArgument("effective Hamiltonian needs at least one mode");
}

EffectiveHamiltonian skeleton(HamiltonianKind kind, std::span<const ModeParams> modes,
                              const Emitter& emitter) {
  check_modes(modes);
  EffectiveHamiltonian h;
  h.kind = kind;
  h.hw0 = emitter.hw0;
  h.modes.assign(modes.begin(), modes.end());
  const auto dim = static_cast<Eigen::Index>(modes.size() + 1);
  h.matrix = Eigen::MatrixXcd::Zero(dim, dim);
  return h;
}

}  // namespace

const char* to_string(HamiltonianKind kind) {
  switch (kind) {
    case HamiltonianKind::standard: return "standard";
    case HamiltonianKind::fano_radiative: return "fano_radiative";
    case HamiltonianKind::fano_general: return "fano_general";
  }
  return "unknown";
}

void EffectiveHamiltonian::validate() const {
  if (matrix.rows() != matrix.cols() || matrix.rows() < 1) {
    throw InvalidArgument("effective Hamiltonian must be a non-empty square matrix");
  }
  if (!matrix.allFinite()) throw InvalidArgument("effective Hamiltonian has non-finite entries");
  const auto d = matrix.rows();
  for (Eigen::Index i = 0; i < d; ++i) {
    if (matrix(i, i).imag() > 0.0) throw InvalidArgument("diagonal gain term in effective Hamiltonian");
    for (Eigen::Index j = 1; j < d; ++j) {
      if (i != j && i != 0 && matrix(i, j) != 0.0) {
        throw InvalidArgument("effective Hamiltonian couples two plasmon modes directly");
      }
    }
  }
}

EffectiveHamiltonian build_standard(std::span<const ModeParams> modes, const Emitter& emitter) {
  auto h = skeleton(HamiltonianKind::standard, modes, emitter);
  h.matrix(0, 0) = cplx(0.0, -0.5 * emitter.hgamma0);
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const auto& m = modes[k];
    if (!(m.hgamma > 0.0)) {
      throw InvalidArgument("mode " + std::to_string(m.n) + " has a non-positive linewidth");
    }
    const auto n = static_cast<Eigen::Index>(k + 1);
    h.matrix(n, n) = cplx(m.hw_n - emitter.hw0, -0.5 * m.hgamma);
    h.matrix(0, n) = m.hg;
    h.matrix(n, 0) = m.hg;
  }
  return h;
}

EffectiveHamiltonian build_fano(std::span<const ModeParams> modes, const Emitter& emitter,
                                FanoVariant variant) {
  const bool rad = variant == FanoVariant::radiative_only;
  auto h = skeleton(rad ? HamiltonianKind::fano_radiative : HamiltonianKind::fano_general, modes,
                    emitter);
  h.matrix(0, 0) = cplx(0.0, -0.5 * (rad ? emitter.hgamma0_rad() : emitter.hgamma0));
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const auto& m = modes[k];
    const std::string tag = "mode " + std::to_string(m.n);
    if (!m.fano_resolved) throw IncompleteModesError(tag + " has no Fano ratio");
    if (rad && !m.radiative_resolved) throw IncompleteModesError(tag + " has no Gamma^rad");
    const double width = rad ? m.hgamma_rad : m.hgamma;
    if (!(width > 0.0)) throw InvalidArgument(tag + " has a non-positive linewidth");
    const auto n = static_cast<Eigen::Index>(k + 1);
    h.matrix(n, n) = cplx(m.hw_n - emitter.hw0, -0.5 * width);
    const cplx off = signed_coupling(m) * cplx(1.0, -0.5 * m.fano_ratio);
    h.matrix(0, n) = off;
    h.matrix(n, 0) = off;
  }
  return h;
}

std::vector<double> gauge_phases(const Eigen::MatrixXcd& h) {
  std::vector<double> theta(static_cast<std::size_t>(h.rows()), 0.0);
  for (Eigen::Index n = 1; n < h.rows(); ++n) {
    const cplx a = h(0, n), b = h(n, 0);
    if (a == 0.0 || b == 0.0) continue;
    theta[static_cast<std::size_t>(n)] = 0.5 * std::arg(a / b);
  }
  return theta;
}

Eigen::MatrixXcd left_from_right(Eigen::MatrixXcd& right, std::span<const double> thetas) {
  const auto d = right.rows();
  if (static_cast<Eigen::Index>(thetas.size()) != d) {
    throw InvalidArgument("gauge phase count does not match the vector dimension");
  }
  Eigen::VectorXcd s2(d);  // diagonal of S S^T
  s2[0] = 1.0;
  for (Eigen::Index n = 1; n < d; ++n) s2[n] = std::polar(1.0, -2.0 * thetas[n]);

  Eigen::MatrixXcd left(d, right.cols());
  for (Eigen::Index m = 0; m < right.cols(); ++m) {
    right.col(m).normalize();
    Eigen::VectorXcd l = s2.cwiseProduct(right.col(m).conjugate());
    const cplx overlap = l.dot(right.col(m));
    if (std::abs(overlap) < 1e-10) {
      throw NearDefectiveError("dressed state " + std::to_string(m) +
                               " has vanishing left/right overlap (near-defective matrix)");
    }
    // <L|R> scales as c^2 under R -> c R, so c = overlap^(-1/2) normalizes both at once.
    right.col(m) /= std::sqrt(overlap);
    left.col(m) = s2.cwiseProduct(right.col(m).conjugate());
  }
  return left;
}

DressedSet eigendecompose(const EffectiveHamiltonian& h) {
  h.validate();
  const auto d = h.matrix.rows();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver;
  solver.setMaxIterations(30 * d);
  solver.compute(h.matrix, true);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("complex QR iteration did not converge in " + std::to_string(30 * d) +
                           " sweeps");
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), 0);
  const auto& ev = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return ev[a].real() < ev[b].real();
  });
  DressedSet set;
  set.hw0 = h.hw0;
  set.eigenvalues.resize(d);
  set.right.resize(d, d);
  for (Eigen::Index m = 0; m < d; ++m) {
    set.eigenvalues[m] = ev[order[m]];
    set.right.col(m) = solver.eigenvectors().col(order[m]);
  }
  const auto thetas = gauge_phases(h.matrix);
  set.left = left_from_right(set.right, thetas);
  return set;
}

double arrowhead_secular_residual(const Eigen::MatrixXcd& h, cplx lambda) {
  const auto d = h.rows();
  std::vector<cplx> diff(static_cast<std::size_t>(d));
  for (Eigen::Index k = 1; k < d; ++k) diff[k] = h(k, k) - lambda;
  cplx prod_all = 1.0;
  for (Eigen::Index k = 1; k < d; ++k) prod_all *= diff[k];
  cplx det = (h(0, 0) - lambda) * prod_all;
  double scale = std::abs(det);
  for (Eigen::Index n = 1; n < d; ++n) {
    cplx p = h(0, n) * h(n, 0);
    for (Eigen::Index k = 1; k < d; ++k) {
      if (k != n) p *= diff[k];
    }
    det -= p;
    scale += std::abs(p);
  }
  return scale > 0.0 ? std::abs(det) / scale : 0.0;
}

double dominant_splitting(const DressedSet& set) {
  if (set.size() < 2) throw InvalidArgument("splitting needs at least two dressed states");
  const Eigen::VectorXd w = set.weights().cwiseAbs();
  Eigen::Index a = 0;
  w.maxCoeff(&a);
  Eigen::Index b = a == 0 ? 1 : 0;
  for (Eigen::Index m = 0; m < w.size(); ++m) {
    if (m != a && w[m] > w[b]) b = m;
  }
  return std::abs(set.eigenvalues[a].real() - set.eigenvalues[b].real());
}

Eigen::VectorXcd excited_emitter(int dimension) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dimension);
  v[0] = 1.0;
  return v;
}

std::vector<AmplitudeState> evolve(const DressedSet& set, const Eigen::VectorXcd& psi0,
                                   std::span<const double> times) {
  if (psi0.size() != set.size()) throw InvalidArgument("initial state has the wrong dimension");
  const Eigen::VectorXcd eta = set.expansion(psi0);
  std::vector<AmplitudeState> out;
  out.reserve(times.size());
  for (double t : times) {
    Eigen::VectorXcd c(set.size());
    for (int m = 0; m < set.size(); ++m) c[m] = eta[m] * std::exp(-kI * set.eigenvalues[m] * t);
    out.push_back({t, set.right * c});
  }
  return out;
}

std::vector<AmplitudeState> evolve(const EffectiveHamiltonian& h, const Eigen::VectorXcd& psi0,
                                   std::span<const double> times) {
  try {
    return evolve(eigendecompose(h), psi0, times);
  } catch (const NearDefectiveError&) {
    return evolve_numeric(h, psi0, times);
  }
}

std::vector<AmplitudeState> evolve_numeric(const EffectiveHamiltonian& h,
                                           const Eigen::VectorXcd& psi0,
                                           std::span<const double> times, double rtol,
                                           double atol) {
  namespace odeint = boost::numeric::odeint;
  using State = std::vector<cplx>;
  h.validate();
  const auto d = h.matrix.rows();
  if (psi0.size() != d) throw InvalidArgument("initial state has the wrong dimension");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] >= times[i - 1])) throw InvalidArgument("times must be non-decreasing");
  }
  std::vector<AmplitudeState> out;
  if (times.empty()) return out;

  const Eigen::MatrixXcd minus_iH = -kI * h.matrix;
  auto rhs = [&](const State& x, State& dxdt, double) {
    Eigen::Map<const Eigen::VectorXcd> xv(x.data(), d);
    Eigen::Map<Eigen::VectorXcd> dv(dxdt.data(), d);
    dv.noalias() = minus_iH * xv;
  };
  std::vector<double> grid;
  if (times.front() > 0.0) grid.push_back(0.0);
  grid.insert(grid.end(), times.begin(), times.end());
  State x(psi0.data(), psi0.data() + d);
  const double scale = std::max(1e-300, h.matrix.cwiseAbs().maxCoeff());
  const bool skip_first = times.front() > 0.0;
  bool first = true;
  auto observe = [&](const State& s, double t) {
    if (first && skip_first) {
      first = false;
      return;
    }
    first = false;
    out.push_back({t, Eigen::Map<const Eigen::VectorXcd>(s.data(), d)});
  };
  try {
    odeint::integrate_times(
        odeint::make_dense_output(atol, rtol, odeint::runge_kutta_dopri5<State>()), rhs, x,
        grid.begin(), grid.end(), 0.01 / scale, observe, odeint::max_step_checker(1000000));
  } catch (const std::exception& e) {
    throw StiffnessError(std::string("amplitude integration stalled (") + e.what() +
                         "); use spectral propagation");
  }
  return out;
}

PolarizationSpectrum polarization_spectrum(const DressedSet& set, std::span<const double> grid) {
  const Eigen::VectorXcd eta = set.expansion(excited_emitter(set.size()));
  const Eigen::VectorXcd m0 = set.weights();
  PolarizationSpectrum p;
  p.spectrum.hw.assign(grid.begin(), grid.end());
  p.spectrum.values.assign(grid.size(), 0.0);
  parallel_for(grid.size(), [&](std::size_t i) {
    const double w = grid[i] - set.hw0;
    cplx c = 0.0;
    for (int m = 0; m < set.size(); ++m) c += eta[m] * m0[m] / (w - set.eigenvalues[m]);
    p.spectrum.values[i] = std::norm(c);
  });
  for (int m = 0; m < set.size(); ++m) {
    p.dressed_hw.push_back(set.energy(m));
    p.dressed_width.push_back(set.width(m));
  }
  return p;
}

double polarization_sum_rule(const DressedSet& set) {
  // P(w) = |C_e(w)|^2 with C_e(w) the half-line transform of C_e(t) = sum a_m e^{-i l_m t};
  // Parseval turns the integral into sum a_m a_m'^* / (i (l_m - l_m'^*)).
  const Eigen::VectorXcd a =
      set.expansion(excited_emitter(set.size())).cwiseProduct(set.weights());
  cplx s = 0.0;
  for (int m = 0; m < set.size(); ++m) {
    for (int k = 0; k < set.size(); ++k) {
      s += a[m] * std::conj(a[k]) * kI / (std::conj(set.eigenvalues[k]) - set.eigenvalues[m]);
    }
  }
  return s.real();
}

Eigen::VectorXcd frequency_amplitudes(const EffectiveHamiltonian& h, double hw) {
  const auto d = h.matrix.rows();
  Eigen::MatrixXcd a = -h.matrix;
  a.diagonal().array() += hw - h.hw0;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  if (!(lu.rcond() > 1e-14)) {
    throw SingularityError("frequency-domain solve is singular at " + std::to_string(hw) + " eV");
  }
  return kI * lu.solve(excited_emitter(static_cast<int>(d)));
}

RadiatedSpectrum radiated_spectrum(const EffectiveHamiltonian& h, std::span<const double> grid,
                                   const Geometry& geometry, const Material& material,
                                   const Emitter& emitter) {
  h.validate();
  if (h.mode_count() < 1) throw InvalidArgument("radiated spectrum needs at least one mode");
  RadiatedSpectrum r;
  r.hw.assign(grid.begin(), grid.end());
  r.p_rad.assign(grid.size(), 0.0);
  r.polarization.assign(grid.size(), 0.0);
  r.c1_population.assign(grid.size(), 0.0);
  const double rd6 = std::pow(geometry.distance, 6);
  parallel_for(grid.size(), [&](std::size_t i) {
    const double hw = grid[i];
    const Eigen::VectorXcd c = frequency_amplitudes(h, hw);
    const cplx alpha = qs_polarizability(1, hw, geometry, material).effective;
    const double grad = radiative_rate(emitter.dipole, hw, geometry.index()) *
                        (1.0 + 4.0 * std::norm(alpha) / rd6);
    r.polarization[i] = std::norm(c[0]);
    r.c1_population[i] = std::norm(c[1]);
    r.p_rad[i] = grad * r.polarization[i] / (2.0 * units::pi);
  });
  return r;
}

std::vector<double> local_maxima(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("abscissa and ordinate differ in length");
  std::vector<double> peaks;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (y[i] > y[i - 1] && y[i] >= y[i + 1]) {
      const double a = y[i - 1], b = y[i], c = y[i + 1];
      const double den = a - 2.0 * b + c;
      const double shift = den != 0.0 ? 0.5 * (a - c) / den : 0.0;
      peaks.push_back(x[i] + shift * 0.5 * (x[i + 1] - x[i - 1]));
    }
  }
  return peaks;
}

}  // namespace pcqed
