// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace pcqed::specfun {

using cplx = std::complex<double>;

inline constexpr int kMaxOrder = 200;

/// Spherical Bessel function of the first kind j_n(z) for complex z.
///
/// Power series for |z| < 1 (this covers the small-argument regime where
/// j_n(z) ~ z^n/(2n+1)!!), normalized Miller downward recurrence otherwise.
cplx spherical_bessel_j(int n, cplx z);

/// y_n(z) = -i (h_n^(1)(z) - j_n(z)).
cplx spherical_bessel_y(int n, cplx z);

/// Spherical Hankel function h_n^(1)(z) by upward recurrence from closed forms.
cplx spherical_hankel1(int n, cplx z);

cplx spherical_bessel_j_prime(int n, cplx z);
cplx spherical_hankel1_prime(int n, cplx z);

/// j_0(z) ... j_nmax(z) from a single recurrence pass.
std::vector<cplx> spherical_bessel_j_sequence(int nmax, cplx z);

/// h_0^(1)(z) ... h_nmax^(1)(z).
std::vector<cplx> spherical_hankel1_sequence(int nmax, cplx z);

/// Riccati-Bessel functions psi_n = z j_n, zeta_n = z h_n^(1) and their derivatives.
struct RiccatiBundle {
  cplx psi;
  cplx dpsi;
  cplx zeta;
  cplx dzeta;
};

RiccatiBundle riccati_bundle(int n, cplx z);

/// n!! as a floating point value. Exact product up to n = 30, log-space above.
double double_factorial(int n);

/// n!! as an exact integer, n <= 33.
std::uint64_t double_factorial_exact(int n);

double log_double_factorial(int n);

}  // namespace pcqed::specfun
