// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#include "pcqed/lindblad.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <string>

#include "pcqed/errors.hpp"

namespace pcqed {

namespace {

constexpr cplx kI{0.0, 1.0};

void check_mode(const StateSpace& space, int n) {
  if (n < 1 || n > space.mode_count) {
    throw InvalidArgument("mode index " + std::to_string(n) + " outside the state space");
  }
}

Eigen::MatrixXcd zero(const StateSpace& space) {
  return Eigen::MatrixXcd::Zero(space.dimension(), space.dimension());
}

// Dense Kronecker product A (x) B.
Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double rate_sqrt(double rate, const std::string& what) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw InvalidArgument("negative or non-finite rate for " + what);
  }
  return std::sqrt(rate);
}

void add_channel(DissipatorSpec& spec, std::string label, Eigen::MatrixXcd op) {
  if (op.cwiseAbs().maxCoeff() == 0.0) return;
  spec.channels.push_back({std::move(label), std::move(op)});
}

// gamma0n^rad consistent with the Fano coupling: alpha g = sqrt(gamma0n^rad Gamma^rad).
double collective_emitter_rate(const ModeParams& m) {
  if (m.hgamma_rad > 0.0) return m.fano_ratio * m.fano_ratio * m.hg * m.hg / m.hgamma_rad;
  if (m.fano_ratio != 0.0) {
    throw InvalidArgument("mode " + std::to_string(m.n) + " has a Fano ratio but no Gamma^rad");
  }
  return m.hgamma0n_rad;
}

std::vector<DensitySnapshot> unvectorize(std::span<const double> times,
                                         const std::vector<Eigen::VectorXcd>& states, int d) {
  std::vector<DensitySnapshot> out;
  out.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    DensitySnapshot s;
    s.t = times[i];
    s.rho = Eigen::Map<const Eigen::MatrixXcd>(states[i].data(), d, d);
    validate_density(s.rho);
    out.push_back(std::move(s));
  }
  return out;
}

int side_of(const Eigen::SparseMatrix<cplx>& l) {
  const auto d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(l.rows()))));
  if (l.rows() != l.cols() || static_cast<Eigen::Index>(d) * d != l.rows()) {
    throw InvalidArgument("Liouvillian must be square with a square dimension");
  }
  return d;
}

void check_times(std::span<const double> times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0)) throw InvalidArgument("times must be non-negative");
    if (i > 0 && !(times[i] >= times[i - 1])) throw InvalidArgument("times must be non-decreasing");
  }
}

}  // namespace

Eigen::MatrixXcd StateSpace::sigma_ge() const {
  auto m = zero(*this);
  m(ground, excited) = 1.0;
  return m;
}

Eigen::MatrixXcd StateSpace::sigma_eg() const { return sigma_ge().adjoint(); }

Eigen::MatrixXcd StateSpace::annihilation(int n) const {
  check_mode(*this, n);
  auto m = zero(*this);
  m(ground, mode_index(n)) = 1.0;
  return m;
}

Eigen::MatrixXcd StateSpace::creation(int n) const { return annihilation(n).adjoint(); }

Eigen::MatrixXcd StateSpace::ground_projector() const {
  auto m = zero(*this);
  m(ground, ground) = 1.0;
  return m;
}

StateSpace build_state_space(int mode_count) {
  if (mode_count < 0) throw InvalidArgument("mode count must be non-negative");
  return StateSpace{mode_count};
}

std::vector<Eigen::Triplet<cplx>> triplets(const Eigen::MatrixXcd& op) {
  std::vector<Eigen::Triplet<cplx>> out;
  for (Eigen::Index j = 0; j < op.cols(); ++j) {
    for (Eigen::Index i = 0; i < op.rows(); ++i) {
      if (op(i, j) != 0.0) out.emplace_back(static_cast<int>(i), static_cast<int>(j), op(i, j));
    }
  }
  return out;
}

const char* to_string(MasterKind kind) {
  switch (kind) {
    case MasterKind::standard: return "standard";
    case MasterKind::fano_radiative: return "fano_radiative";
    case MasterKind::fano_full: return "fano_full";
  }
  return "unknown";
}

DissipatorSpec build_dissipators(MasterKind kind, std::span<const ModeParams> modes,
                                 const Emitter& emitter, const StateSpace& space) {
  if (static_cast<int>(modes.size()) != space.mode_count) {
    throw InvalidArgument("mode list does not match the state space");
  }
  DissipatorSpec spec;
  spec.kind = kind;
  const auto sigma = space.sigma_ge();
  if (kind == MasterKind::standard) {
    add_channel(spec, "emitter", rate_sqrt(emitter.hgamma0, "gamma0") * sigma);
    for (std::size_t k = 0; k < modes.size(); ++k) {
      const auto& m = modes[k];
      const int n = static_cast<int>(k) + 1;
      add_channel(spec, "lsp_" + std::to_string(m.n),
                  rate_sqrt(m.hgamma, "Gamma_" + std::to_string(m.n)) * space.annihilation(n));
    }
    return spec;
  }

  double carried = 0.0;
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const auto& m = modes[k];
    const std::string tag = std::to_string(m.n);
    if (!m.fano_resolved) throw IncompleteModesError("mode " + tag + " has no Fano ratio");
    if (!m.radiative_resolved) throw IncompleteModesError("mode " + tag + " has no Gamma^rad");
    const int n = static_cast<int>(k) + 1;
    const double g0n = collective_emitter_rate(m);
    carried += g0n;
    add_channel(spec, "collective_" + tag,
                rate_sqrt(g0n, "gamma0n^rad") * sigma +
                    rate_sqrt(m.hgamma_rad, "Gamma_" + tag + "^rad") * space.annihilation(n));
  }
  const double residual = emitter.hgamma0_rad() - carried;
  // Rounding can leave a residual of a few ulps below zero when the orders carry everything.
  const double tol = 1e-12 * std::max(emitter.hgamma0_rad(), carried);
  add_channel(spec, "emitter_rad_residual",
              rate_sqrt(residual < 0.0 && residual > -tol ? 0.0 : residual,
                        "gamma0^rad - sum gamma0n^rad") *
                  sigma);
  if (kind == MasterKind::fano_full) {
    add_channel(spec, "emitter_nr", rate_sqrt(emitter.hgamma0_nr(), "gamma0^nr") * sigma);
    for (std::size_t k = 0; k < modes.size(); ++k) {
      const auto& m = modes[k];
      const std::string tag = std::to_string(m.n);
      add_channel(spec, "lsp_nr_" + tag,
                  rate_sqrt(m.hgamma - m.hgamma_rad, "Gamma_" + tag + "^nr") *
                      space.annihilation(static_cast<int>(k) + 1));
    }
  }
  return spec;
}

Eigen::MatrixXcd system_hamiltonian(MasterKind kind, std::span<const ModeParams> modes,
                                    const Emitter& emitter, const StateSpace& space) {
  if (static_cast<int>(modes.size()) != space.mode_count) {
    throw InvalidArgument("mode list does not match the state space");
  }
  auto h = zero(space);
  const auto sigma = space.sigma_ge();
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const auto& m = modes[k];
    const int n = static_cast<int>(k) + 1;
    const auto a = space.annihilation(n);
    const double g = kind == MasterKind::standard ? m.hg : signed_coupling(m);
    h += (m.hw_n - emitter.hw0) * a.adjoint() * a;
    h += g * (sigma.adjoint() * a + a.adjoint() * sigma);
  }
  return h;
}

Eigen::MatrixXcd dissipator_action(const Eigen::MatrixXcd& c, const Eigen::MatrixXcd& rho) {
  const Eigen::MatrixXcd cdc = c.adjoint() * c;
  return c * rho * c.adjoint() - 0.5 * (cdc * rho + rho * cdc);
}

Eigen::SparseMatrix<cplx> build_liouvillian(const Eigen::MatrixXcd& h_s,
                                            const DissipatorSpec& dissipators) {
  if (h_s.rows() != h_s.cols()) throw InvalidArgument("system Hamiltonian must be square");
  if ((h_s - h_s.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, h_s.cwiseAbs().maxCoeff())) {
    throw InvalidArgument("system Hamiltonian is not hermitian");
  }
  const auto d = h_s.rows();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
  // Column stacking: vec(A rho B) = (B^T (x) A) vec(rho).
  Eigen::MatrixXcd l = -kI * (kron(id, h_s) - kron(h_s.transpose(), id));
  for (const auto& ch : dissipators.channels) {
    if (ch.op.rows() != d || ch.op.cols() != d) {
      throw InvalidArgument("collapse operator " + ch.label + " has the wrong dimension");
    }
    const Eigen::MatrixXcd cdc = ch.op.adjoint() * ch.op;
    l += kron(ch.op.conjugate(), ch.op) - 0.5 * kron(id, cdc) - 0.5 * kron(cdc.transpose(), id);
  }
  return l.sparseView(cplx(0.0), 0.0);
}

MasterEquation build_master_equation(MasterKind kind, std::span<const ModeParams> modes,
                                     const Emitter& emitter) {
  MasterEquation me;
  me.kind = kind;
  me.space = build_state_space(static_cast<int>(modes.size()));
  me.hw0 = emitter.hw0;
  me.modes.assign(modes.begin(), modes.end());
  me.hamiltonian = system_hamiltonian(kind, modes, emitter, me.space);
  me.dissipators = build_dissipators(kind, modes, emitter, me.space);
  me.liouvillian = build_liouvillian(me.hamiltonian, me.dissipators);
  return me;
}

EffectiveHamiltonian effective_hamiltonian_from_lindblad(const MasterEquation& master) {
  Eigen::MatrixXcd full = master.hamiltonian;
  for (const auto& ch : master.dissipators.channels) full -= 0.5 * kI * ch.op.adjoint() * ch.op;
  const auto n = master.space.dimension() - 1;
  EffectiveHamiltonian h;
  switch (master.kind) {
    case MasterKind::standard: h.kind = HamiltonianKind::standard; break;
    case MasterKind::fano_radiative: h.kind = HamiltonianKind::fano_radiative; break;
    case MasterKind::fano_full: h.kind = HamiltonianKind::fano_general; break;
  }
  h.hw0 = master.hw0;
  h.modes = master.modes;
  h.matrix = full.bottomRightCorner(n, n);
  return h;
}

double DensitySnapshot::hermiticity_error() const {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double DensitySnapshot::min_eigenvalue() const {
  const Eigen::MatrixXcd h = 0.5 * (rho + rho.adjoint());
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .minCoeff();
}

void validate_density(const Eigen::MatrixXcd& rho, const DensityTolerances& tol) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) {
    throw InvalidArgument("density matrix must be non-empty and square");
  }
  if (!rho.allFinite()) throw InvariantViolation("density matrix has non-finite entries");
  const DensitySnapshot s{0.0, rho};
  if (s.hermiticity_error() > tol.hermiticity) {
    throw InvariantViolation("density matrix is not hermitian");
  }
  const double tr = s.trace();
  if (tr < -tol.trace || tr > 1.0 + tol.trace) {
    throw InvariantViolation("density matrix trace " + std::to_string(tr) + " outside [0, 1]");
  }
  if (s.min_eigenvalue() < -tol.positivity) {
    throw InvariantViolation("density matrix has a negative eigenvalue");
  }
}

Eigen::MatrixXcd sector_density(const Eigen::VectorXcd& amplitude) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(amplitude.size() + 1);
  psi.tail(amplitude.size()) = amplitude;
  return psi * psi.adjoint();
}

std::vector<DensitySnapshot> evolve_master(const Eigen::SparseMatrix<cplx>& liouvillian,
                                           const Eigen::MatrixXcd& rho0,
                                           std::span<const double> times, double rtol,
                                           double atol) {
  namespace odeint = boost::numeric::odeint;
  using State = std::vector<cplx>;
  const int d = side_of(liouvillian);
  if (rho0.rows() != d || rho0.cols() != d) {
    throw InvalidArgument("initial density matrix has the wrong dimension");
  }
  validate_density(rho0);
  check_times(times);
  if (times.empty()) return {};

  const auto dd = static_cast<Eigen::Index>(d) * d;
  auto rhs = [&](const State& x, State& dxdt, double) {
    Eigen::Map<const Eigen::VectorXcd> xv(x.data(), dd);
    Eigen::Map<Eigen::VectorXcd> dv(dxdt.data(), dd);
    dv.noalias() = liouvillian * xv;
  };
  std::vector<double> grid;
  const bool skip_first = times.front() > 0.0;
  if (skip_first) grid.push_back(0.0);
  grid.insert(grid.end(), times.begin(), times.end());
  State x(rho0.data(), rho0.data() + dd);
  double scale = 1e-300;
  for (Eigen::Index k = 0; k < liouvillian.outerSize(); ++k) {
    for (Eigen::SparseMatrix<cplx>::InnerIterator it(liouvillian, k); it; ++it) {
      scale = std::max(scale, std::abs(it.value()));
    }
  }
  std::vector<Eigen::VectorXcd> states;
  bool first = true;
  auto observe = [&](const State& s, double) {
    if (first && skip_first) {
      first = false;
      return;
    }
    first = false;
    states.emplace_back(Eigen::Map<const Eigen::VectorXcd>(s.data(), dd));
  };
  try {
    odeint::integrate_times(
        odeint::make_dense_output(atol, rtol, odeint::runge_kutta_dopri5<State>()), rhs, x,
        grid.begin(), grid.end(), 0.01 / scale, observe, odeint::max_step_checker(1000000));
  } catch (const std::exception& e) {
    throw StiffnessError(std::string("master-equation integration stalled (") + e.what() +
                         "); use evolve_master_spectral");
  }
  return unvectorize(times, states, d);
}

std::vector<DensitySnapshot> evolve_master_spectral(const Eigen::SparseMatrix<cplx>& liouvillian,
                                                    const Eigen::MatrixXcd& rho0,
                                                    std::span<const double> times) {
  const int d = side_of(liouvillian);
  if (rho0.rows() != d || rho0.cols() != d) {
    throw InvalidArgument("initial density matrix has the wrong dimension");
  }
  validate_density(rho0);
  check_times(times);
  const Eigen::MatrixXcd l(liouvillian);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es;
  es.setMaxIterations(30 * static_cast<Eigen::Index>(l.rows()));
  es.compute(l);
  if (es.info() != Eigen::Success) throw NumericalFailure("Liouvillian eigendecomposition failed");
  const Eigen::MatrixXcd& v = es.eigenvectors();
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(v);
  const Eigen::VectorXcd r0 = Eigen::Map<const Eigen::VectorXcd>(rho0.data(), rho0.size());
  const Eigen::VectorXcd c = lu.solve(r0);
  if ((v * c - r0).norm() > 1e-8 * std::max(1.0, r0.norm())) {
    throw NearDefectiveError("Liouvillian eigenvectors are numerically dependent");
  }
  std::vector<Eigen::VectorXcd> states;
  states.reserve(times.size());
  for (double t : times) {
    const Eigen::VectorXcd e = (es.eigenvalues() * t).array().exp().matrix().cwiseProduct(c);
    states.emplace_back(v * e);
  }
  return unvectorize(times, states, d);
}

}  // namespace pcqed
