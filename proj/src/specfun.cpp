// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#include "pcqed/specfun.hpp"

#include <cmath>
#include <string>

#include "pcqed/errors.hpp"

namespace pcqed::specfun {
namespace {

constexpr cplx I{0.0, 1.0};

void check_order(int n) {
  if (n < 0) throw InvalidArgument("negative Bessel order " + std::to_string(n));
  if (n > kMaxOrder) {
    throw UnsupportedOrder("Bessel order " + std::to_string(n) + " exceeds cap " +
                           std::to_string(kMaxOrder));
  }
}

void check_argument(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw InvalidArgument("non-finite Bessel argument");
  }
}

// j_n(z) = z^n/(2n+1)!! sum_k (-z^2/2)^k / (k! (2n+3)(2n+5)...(2n+2k+1))
cplx series_j(int n, cplx z) {
  cplx prefactor = 1.0;
  for (int i = 1; i <= n; ++i) prefactor *= z / double(2 * i + 1);
  if (prefactor == cplx{}) return prefactor;
  const cplx x = -0.5 * z * z;
  cplx term = 1.0;
  cplx sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= x / double(k * (2 * n + 2 * k + 1));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return prefactor * sum;
}

bool use_series(cplx z) { return std::abs(z) < 1.0; }

}  // namespace

std::vector<cplx> spherical_bessel_j_sequence(int nmax, cplx z) {
  check_order(nmax);
  check_argument(z);
  std::vector<cplx> out(nmax + 1);
  if (use_series(z)) {
    for (int n = 0; n <= nmax; ++n) out[n] = series_j(n, z);
    return out;
  }

  // Miller: j_n is the minimal solution of the three-term recurrence, so
  // running it downward from well above max(n, |z|) converges to j_n up to a
  // common factor, fixed by the closed forms of j_0 or j_1.
  const double az = std::abs(z);
  const double top = std::max<double>(nmax, az);
  const int start = static_cast<int>(top + 20.0 + std::sqrt(40.0 * top)) + 10;
  cplx above = 0.0;
  cplx current = 1e-100;
  for (int k = start; k >= 1; --k) {
    if (k <= nmax) out[k] = current;
    const cplx below = double(2 * k + 1) / z * current - above;
    above = current;
    current = below;
    if (std::abs(current) > 1e200) {
      current *= 1e-200;
      above *= 1e-200;
      for (int m = k; m <= nmax; ++m) out[m] *= 1e-200;
    }
  }
  out[0] = current;
  const cplx f1 = nmax >= 1 ? out[1] : above;

  const cplx j0 = std::sin(z) / z;
  const cplx j1 = std::sin(z) / (z * z) - std::cos(z) / z;
  const cplx scale = std::abs(j0) >= std::abs(j1) ? j0 / current : j1 / f1;
  for (auto& v : out) v *= scale;
  return out;
}

std::vector<cplx> spherical_hankel1_sequence(int nmax, cplx z) {
  check_order(nmax);
  check_argument(z);
  if (z == cplx{}) throw SingularityError("h_n^(1) is singular at z = 0");
  std::vector<cplx> out(nmax + 1);
  const cplx e = std::exp(I * z);
  out[0] = -I * e / z;
  if (nmax >= 1) out[1] = -e * (z + I) / (z * z);
  for (int n = 1; n < nmax; ++n) out[n + 1] = double(2 * n + 1) / z * out[n] - out[n - 1];
  return out;
}

cplx spherical_bessel_j(int n, cplx z) {
  check_order(n);
  check_argument(z);
  if (use_series(z)) return series_j(n, z);
  return spherical_bessel_j_sequence(n, z)[n];
}

cplx spherical_hankel1(int n, cplx z) { return spherical_hankel1_sequence(n, z)[n]; }

cplx spherical_bessel_y(int n, cplx z) {
  return -I * (spherical_hankel1(n, z) - spherical_bessel_j(n, z));
}

cplx spherical_bessel_j_prime(int n, cplx z) {
  check_order(n);
  if (z == cplx{}) return n == 1 ? cplx{1.0 / 3.0} : cplx{};
  const auto j = spherical_bessel_j_sequence(n + 1, z);
  if (n == 0) return -j[1];
  return j[n - 1] - double(n + 1) / z * j[n];
}

cplx spherical_hankel1_prime(int n, cplx z) {
  const auto h = spherical_hankel1_sequence(n + 1, z);
  if (n == 0) return -h[1];
  return h[n - 1] - double(n + 1) / z * h[n];
}

RiccatiBundle riccati_bundle(int n, cplx z) {
  check_order(n);
  check_argument(z);
  if (z == cplx{}) throw SingularityError("zeta_n is singular at z = 0");
  const auto j = spherical_bessel_j_sequence(n, z);
  const auto h = spherical_hankel1_sequence(n, z);
  RiccatiBundle b;
  b.psi = z * j[n];
  b.zeta = z * h[n];
  if (n == 0) {
    b.dpsi = std::cos(z);
    b.dzeta = std::exp(I * z);
  } else {
    b.dpsi = z * j[n - 1] - double(n) * j[n];
    b.dzeta = z * h[n - 1] - double(n) * h[n];
  }
  return b;
}

double log_double_factorial(int n) {
  if (n < -1) throw InvalidArgument("double factorial of " + std::to_string(n));
  if (n <= 0) return 0.0;
  if (n % 2 == 0) {
    const int k = n / 2;
    return k * std::log(2.0) + std::lgamma(k + 1.0);
  }
  const int k = (n - 1) / 2;
  return std::lgamma(2.0 * k + 2.0) - k * std::log(2.0) - std::lgamma(k + 1.0);
}

double double_factorial(int n) {
  if (n < -1) throw InvalidArgument("double factorial of " + std::to_string(n));
  if (n > 30) return std::exp(log_double_factorial(n));
  double r = 1.0;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}

std::uint64_t double_factorial_exact(int n) {
  if (n < -1) throw InvalidArgument("double factorial of " + std::to_string(n));
  if (n > 33) throw UnsupportedOrder("exact double factorial overflows above 33");
  std::uint64_t r = 1;
  for (int k = n; k > 1; k -= 2) r *= static_cast<std::uint64_t>(k);
  return r;
}

}  // namespace pcqed::specfun
