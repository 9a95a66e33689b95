#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kgs {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Mismatched sizes, wrong grid kinds, malformed files.
struct StructuralError : Error {
  using Error::Error;
};

/// Inputs outside the documented domain (non-positive coefficients, p outside (4,6), ...).
struct DomainError : Error {
  using Error::Error;
};

/// Config or command-line problems.
struct ParseError : Error {
  using Error::Error;
};

/// Fibering projection attempted with zero nonlinear moments.
struct NoRootError : DomainError {
  using DomainError::DomainError;
};

/// Decay fit with fewer than the minimum usable nodes.
struct InsufficientDataError : Error {
  using Error::Error;
};

/// Solver divergence; carries the energy trace of the failed run.
struct NonConvergenceError : Error {
  std::vector<double> trace;
  NonConvergenceError(const std::string& msg, std::vector<double> tr)
      : Error(msg), trace(std::move(tr)) {}
};

}  // namespace kgs
