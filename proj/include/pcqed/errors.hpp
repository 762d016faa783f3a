// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pcqed {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input value (NaN argument, negative rate, malformed table...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Mode parameters lack a quantity the requested construction needs (Fano ratio, Gamma^rad).
class IncompleteModesError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class UnsupportedOrder : public Error {
 public:
  using Error::Error;
};

/// Evaluation at a pole or branch point (h_n at z = 0, lossless resonance).
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Query outside a tabulated domain. No extrapolation is ever attempted.
class RangeError : public Error {
 public:
  using Error::Error;
};

class NoResonanceError : public Error {
 public:
  using Error::Error;
};

/// Eigensolver or linear-solve breakdown.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Left/right eigenvector overlap below threshold: the matrix is (close to) defective.
class NearDefectiveError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

/// Adaptive integrator could not make progress.
class StiffnessError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

/// Density matrix left the physical set (trace, hermiticity, positivity).
class InvariantViolation : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

/// Least-squares fit that did not converge. Carries the best iterate found.
class FitFailure : public NumericalFailure {
 public:
  FitFailure(const std::string& what, std::vector<double> best, double best_cost)
      : NumericalFailure(what), best_parameters(std::move(best)), cost(best_cost) {}

  std::vector<double> best_parameters;
  double cost;
};

/// Configuration file that does not match the scenario schema.
class SchemaError : public Error {
 public:
  SchemaError(std::string field_path, const std::string& what)
      : Error(field_path + ": " + what), field(std::move(field_path)) {}

  std::string field;
};

}  // namespace pcqed
