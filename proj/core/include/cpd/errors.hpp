#pragma once

#include <stdexcept>
#include <string>

namespace cpd {

// Malformed or dimensionally inconsistent input.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A dual point outside the region where the requested matrix is positive
// definite (Cholesky failed).
class InfeasiblePoint : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No strictly feasible dual point could be constructed.
class InfeasibleProblem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Eigensolver or factorization breakdown that is not a feasibility verdict.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Request outside what an operation supports (e.g. grid search for n > 3).
class Unsupported : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace cpd
