// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <span>
#include <string>
#include <vector>

#include "pcqed/coupling.hpp"
#include "pcqed/heff.hpp"
#include "pcqed/medium.hpp"

namespace pcqed {

/// Ground plus single-excitation sector: |g,0>, |e,0>, |g,1_1>, ..., |g,1_N>.
struct StateSpace {
  int mode_count = 0;

  static constexpr int ground = 0;
  static constexpr int excited = 1;

  int dimension() const { return mode_count + 2; }
  int mode_index(int n) const { return n + 1; }  // n is 1-based

  Eigen::MatrixXcd sigma_ge() const;            // |g,0><e,0|
  Eigen::MatrixXcd sigma_eg() const;            // |e,0><g,0|
  Eigen::MatrixXcd annihilation(int n) const;   // a_n restricted to the sector
  Eigen::MatrixXcd creation(int n) const;       // a_n^dag restricted to the sector
  /// |g,0><g,0|.
  Eigen::MatrixXcd ground_projector() const;
};

StateSpace build_state_space(int mode_count);

/// Non-zero entries of an operator as (row, col, value).
std::vector<Eigen::Triplet<cplx>> triplets(const Eigen::MatrixXcd& op);

enum class MasterKind { standard, fano_radiative, fano_full };

const char* to_string(MasterKind kind);

struct CollapseChannel {
  std::string label;
  Eigen::MatrixXcd op;  // rate factors already folded in, units sqrt(eV)
};

struct DissipatorSpec {
  MasterKind kind = MasterKind::standard;
  std::vector<CollapseChannel> channels;
};

/// standard: sqrt(gamma0) sigma_ge and sqrt(Gamma_n) a_n.
/// fano_radiative: c_n = sqrt(gamma0n^rad) sigma_ge + sqrt(Gamma_n^rad) a_n, plus
/// sqrt(gamma0^rad - sum gamma0n^rad) sigma_ge for the emitter radiation not carried by the
/// resolved orders. fano_full adds sqrt(gamma0^nr) sigma_ge and sqrt(Gamma_n^nr) a_n.
/// gamma0n^rad is taken as alpha_n^2 g_n^2 / Gamma_n^rad so that the collective cross term
/// reproduces the Fano coupling exactly.
DissipatorSpec build_dissipators(MasterKind kind, std::span<const ModeParams> modes,
                                 const Emitter& emitter, const StateSpace& space);

/// sum Delta_n a_n^dag a_n + g_n (sigma_eg a_n + a_n^dag sigma_ge), rotating at hw0.
/// The Fano kinds use the signed coupling.
Eigen::MatrixXcd system_hamiltonian(MasterKind kind, std::span<const ModeParams> modes,
                                    const Emitter& emitter, const StateSpace& space);

/// D[c] rho = c rho c^dag - {c^dag c, rho}/2.
Eigen::MatrixXcd dissipator_action(const Eigen::MatrixXcd& c, const Eigen::MatrixXcd& rho);

/// Superoperator on column-stacked rho: d vec(rho)/dt = L vec(rho), hbar = 1.
Eigen::SparseMatrix<cplx> build_liouvillian(const Eigen::MatrixXcd& h_s,
                                            const DissipatorSpec& dissipators);

struct MasterEquation {
  MasterKind kind = MasterKind::standard;
  StateSpace space;
  double hw0 = 0.0;
  std::vector<ModeParams> modes;
  Eigen::MatrixXcd hamiltonian;
  DissipatorSpec dissipators;
  Eigen::SparseMatrix<cplx> liouvillian;
};

MasterEquation build_master_equation(MasterKind kind, std::span<const ModeParams> modes,
                                     const Emitter& emitter);

/// H_S - (i/2) sum_k c_k^dag c_k restricted to {|e,0>, |g,1_n>}.
EffectiveHamiltonian effective_hamiltonian_from_lindblad(const MasterEquation& master);

struct DensitySnapshot {
  double t = 0.0;  // hbar/eV
  Eigen::MatrixXcd rho;

  double trace() const { return rho.trace().real(); }
  double population(int index) const { return rho(index, index).real(); }
  double hermiticity_error() const;
  double min_eigenvalue() const;
};

struct DensityTolerances {
  double hermiticity = 1e-12;
  double trace = 1e-9;
  double positivity = 1e-9;
};

/// Throws InvariantViolation if rho is not hermitian, has trace outside [0, 1] or a negative
/// eigenvalue beyond the tolerances.
void validate_density(const Eigen::MatrixXcd& rho, const DensityTolerances& tol = {});

/// |psi><psi| with psi given on {|e,0>, |g,1_n>} (ground amplitude zero).
Eigen::MatrixXcd sector_density(const Eigen::VectorXcd& amplitude);

/// Adaptive Dormand-Prince 5(4) on vec(rho); every output is validated.
std::vector<DensitySnapshot> evolve_master(const Eigen::SparseMatrix<cplx>& liouvillian,
                                           const Eigen::MatrixXcd& rho0,
                                           std::span<const double> times, double rtol = 1e-8,
                                           double atol = 1e-12);

/// Dense eigendecomposition of L; exact propagation for stiff problems.
std::vector<DensitySnapshot> evolve_master_spectral(const Eigen::SparseMatrix<cplx>& liouvillian,
                                                    const Eigen::MatrixXcd& rho0,
                                                    std::span<const double> times);

}  // namespace pcqed
