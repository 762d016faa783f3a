// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "pcqed/coupling.hpp"
#include "pcqed/medium.hpp"

namespace pcqed {

enum class HamiltonianKind { standard, fano_radiative, fano_general };

const char* to_string(HamiltonianKind kind);

/// Single-excitation non-hermitian Hamiltonian in the frame rotating at hw0.
/// Basis order: |e,0>, |g,1_1>, ..., |g,1_N>. Entries in eV.
struct EffectiveHamiltonian {
  HamiltonianKind kind = HamiltonianKind::standard;
  Eigen::MatrixXcd matrix;
  double hw0 = 0.0;
  std::vector<ModeParams> modes;

  int dimension() const { return static_cast<int>(matrix.rows()); }
  int mode_count() const { return dimension() - 1; }
  /// Square, finite, arrowhead-shaped, non-positive imaginary diagonal.
  void validate() const;
};

/// Diagonal {-i gamma0/2, Delta_n - i Gamma_n/2}, off-diagonals g_n.
EffectiveHamiltonian build_standard(std::span<const ModeParams> modes, const Emitter& emitter);

enum class FanoVariant { radiative_only, general };

/// Off-diagonals g_n (1 - i alpha_n/2) with g_n = signed_coupling(mode). radiative_only keeps
/// gamma0^rad and Gamma_n^rad on the diagonal, general the full gamma0 and Gamma_n.
EffectiveHamiltonian build_fano(std::span<const ModeParams> modes, const Emitter& emitter,
                                FanoVariant variant);

/// theta_n = arg(H[0,n]/H[n,0])/2: the phases that make S^dag H S complex symmetric.
std::vector<double> gauge_phases(const Eigen::MatrixXcd& h);

/// |L_m> = S S^T |R_m>^*, with S = diag(1, e^{-i theta_n}). Right vectors are rescaled in place
/// so that <L_m|R_m> = 1. Throws NearDefectiveError when a unit right vector has
/// |<L_m|R_m>| < 1e-10.
Eigen::MatrixXcd left_from_right(Eigen::MatrixXcd& right, std::span<const double> thetas);

/// Biorthogonal eigensystem. Eigenvalues lambda_m = w_m - i gamma_m/2 in the rotating frame,
/// sorted by real part.
struct DressedSet {
  double hw0 = 0.0;
  Eigen::VectorXcd eigenvalues;
  Eigen::MatrixXcd right;  // columns
  Eigen::MatrixXcd left;   // columns, left.adjoint() * right = I

  int size() const { return static_cast<int>(eigenvalues.size()); }
  /// m_0: emitter component of each right vector.
  Eigen::VectorXcd weights() const { return right.row(0).transpose(); }
  /// eta_m = <L_m|psi0>.
  Eigen::VectorXcd expansion(const Eigen::VectorXcd& psi0) const { return left.adjoint() * psi0; }
  double energy(int m) const { return hw0 + eigenvalues[m].real(); }
  double width(int m) const { return -2.0 * eigenvalues[m].imag(); }
};

DressedSet eigendecompose(const EffectiveHamiltonian& h);

/// Arrowhead secular determinant (H00 - l) prod_k (D_k - l) - sum_n H0n Hn0 prod_{k!=n} (D_k - l),
/// divided by the sum of the magnitudes of its terms. Near 1e-16 at an exact eigenvalue.
double arrowhead_secular_residual(const Eigen::MatrixXcd& h, std::complex<double> lambda);

/// Re(lambda) difference of the two states with the largest |m_0|.
double dominant_splitting(const DressedSet& set);

struct AmplitudeState {
  double t = 0.0;              // hbar/eV
  Eigen::VectorXcd amplitude;  // C_e, C_1..C_N

  double emitter_population() const { return std::norm(amplitude[0]); }
  double norm() const { return amplitude.squaredNorm(); }
};

/// psi0 = |e,0>.
Eigen::VectorXcd excited_emitter(int dimension);

/// Spectral propagation sum_m eta_m |R_m> e^{-i lambda_m t}. Falls back to adaptive
/// integration when the matrix is near-defective.
std::vector<AmplitudeState> evolve(const EffectiveHamiltonian& h, const Eigen::VectorXcd& psi0,
                                   std::span<const double> times);

/// Same with an explicit dressed set (no re-diagonalization).
std::vector<AmplitudeState> evolve(const DressedSet& set, const Eigen::VectorXcd& psi0,
                                   std::span<const double> times);

/// Adaptive Dormand-Prince 5(4) integration of i d psi/dt = H psi.
std::vector<AmplitudeState> evolve_numeric(const EffectiveHamiltonian& h,
                                           const Eigen::VectorXcd& psi0,
                                           std::span<const double> times, double rtol = 1e-10,
                                           double atol = 1e-12);

struct PolarizationSpectrum {
  Spectrum spectrum;                 // P(w) on the absolute grid
  std::vector<double> dressed_hw;    // hw0 + w_m
  std::vector<double> dressed_width; // gamma_m
};

/// P(w) = |sum_m eta_m m_0 / (w - hw0 - lambda_m)|^2 for psi0 = |e,0>.
PolarizationSpectrum polarization_spectrum(const DressedSet& set, std::span<const double> grid);

/// Closed-form integral of P over d(hbar w)/2pi, from the residues.
double polarization_sum_rule(const DressedSet& set);

/// Frequency-domain amplitudes C(w) = i (w - hw0 - H)^{-1} psi0 for psi0 = |e,0>.
Eigen::VectorXcd frequency_amplitudes(const EffectiveHamiltonian& h, double hw);

struct RadiatedSpectrum {
  std::vector<double> hw;
  std::vector<double> p_rad;         // gamma^rad(w) P(w) / 2pi
  std::vector<double> polarization;  // P(w) = |C_e(w)|^2
  std::vector<double> c1_population; // |C_1(w)|^2
};

/// gamma^rad(w) = gamma_0^rad(w) [1 + 4 |alpha_1^eff(w)|^2 / r_d^6].
RadiatedSpectrum radiated_spectrum(const EffectiveHamiltonian& h, std::span<const double> grid,
                                   const Geometry& geometry, const Material& material,
                                   const Emitter& emitter);

/// Local maxima of a sampled curve, refined by a parabola through three samples.
std::vector<double> local_maxima(std::span<const double> x, std::span<const double> y);

}  // namespace pcqed
