// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace pcqed {

struct LMOptions {
  int max_iterations = 200;
  double lambda0 = 1e-3;
  double lambda_up = 10.0;
  double lambda_down = 10.0;
  double cost_rtol = 1e-12;  // relative cost change on an accepted step
  double grad_tol = 1e-10;   // infinity norm of J^T r
  double lambda_max = 1e16;  // damping this large means no representable descent step is left
};

struct LMResult {
  std::vector<double> x;
  double cost = 0.0;  // 0.5 * sum r^2
  int iterations = 0;
  bool converged = false;
  std::string reason;
};

/// r(x) written into the second argument; its size is fixed by `residual_count`.
using ResidualFunction = std::function<void(std::span<const double>, std::span<double>)>;

/// Levenberg-Marquardt with Marquardt diagonal scaling and a central-difference Jacobian.
/// Never throws on non-convergence: callers inspect `converged`.
LMResult levenberg_marquardt(const ResidualFunction& residual, std::vector<double> x0,
                             std::size_t residual_count, const LMOptions& options = {});

}  // namespace pcqed
