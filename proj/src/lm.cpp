// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#include "pcqed/lm.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "pcqed/errors.hpp"

namespace pcqed {

namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

double half_sq(const Vec& r) { return 0.5 * r.squaredNorm(); }

Vec eval(const ResidualFunction& f, const Vec& x, std::size_t m) {
  Vec r(static_cast<Eigen::Index>(m));
  f(std::span<const double>(x.data(), x.size()), std::span<double>(r.data(), r.size()));
  return r;
}

Mat jacobian(const ResidualFunction& f, const Vec& x, std::size_t m) {
  const Eigen::Index n = x.size();
  Mat J(static_cast<Eigen::Index>(m), n);
  const double eps = std::cbrt(std::numeric_limits<double>::epsilon());
  Vec xp = x;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double h = eps * std::max(1.0, std::abs(x[j]));
    xp[j] = x[j] + h;
    const Vec rp = eval(f, xp, m);
    xp[j] = x[j] - h;
    const Vec rm = eval(f, xp, m);
    xp[j] = x[j];
    J.col(j) = (rp - rm) / (2.0 * h);
  }
  return J;
}

bool finite(const Vec& v) { return v.allFinite(); }

}  // namespace

LMResult levenberg_marquardt(const ResidualFunction& residual, std::vector<double> x0,
                             std::size_t residual_count, const LMOptions& options) {
  if (x0.empty()) throw InvalidArgument("least squares needs at least one parameter");
  if (residual_count < x0.size()) throw InvalidArgument("fewer residuals than parameters");

  Vec x = Eigen::Map<Vec>(x0.data(), static_cast<Eigen::Index>(x0.size()));
  Vec r = eval(residual, x, residual_count);
  if (!finite(r)) throw InvalidArgument("residuals not finite at the starting point");
  double cost = half_sq(r);
  double lambda = options.lambda0;

  LMResult out;
  auto finish = [&](bool ok, const char* why, int it) {
    out.x.assign(x.data(), x.data() + x.size());
    out.cost = cost;
    out.iterations = it;
    out.converged = ok;
    out.reason = why;
    return out;
  };

  for (int it = 1; it <= options.max_iterations; ++it) {
    if (cost == 0.0) return finish(true, "zero residual", it - 1);
    const Mat J = jacobian(residual, x, residual_count);
    const Vec g = J.transpose() * r;
    if (g.lpNorm<Eigen::Infinity>() < options.grad_tol) return finish(true, "gradient", it - 1);
    const Mat A = J.transpose() * J;
    const Vec diag = A.diagonal().cwiseMax(1e-300);

    bool accepted = false;
    while (!accepted) {
      Mat Ad = A;
      Ad.diagonal() += lambda * diag;
      const Vec step = Ad.ldlt().solve(-g);
      const Vec xn = x + step;
      Vec rn = eval(residual, xn, residual_count);
      const double cn = finite(rn) ? half_sq(rn) : std::numeric_limits<double>::infinity();
      if (step.allFinite() && cn < cost) {
        const double change = (cost - cn) / cost;
        x = xn;
        r = std::move(rn);
        cost = cn;
        lambda = std::max(lambda / options.lambda_down, 1e-15);
        accepted = true;
        if (change < options.cost_rtol) return finish(true, "cost change", it);
      } else {
        lambda *= options.lambda_up;
        if (lambda > options.lambda_max) {
          // No decrease is possible at any damping: the cost sits at its rounding floor.
          return finish(true, "stagnation", it);
        }
      }
    }
  }
  return finish(false, "iteration limit", options.max_iterations);
}

}  // namespace pcqed
