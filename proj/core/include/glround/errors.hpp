#pragma once

#include <stdexcept>
#include <string>

namespace glround {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// Power iteration did not settle within its iteration cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a documented precondition (bad generator set, bad graph, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive enumeration would exceed its configured work budget.
class BudgetExceededError : public Error {
 public:
  BudgetExceededError(const std::string& what, double required, double budget)
      : Error(what), required_(required), budget_(budget) {}

  double required() const noexcept { return required_; }
  double budget() const noexcept { return budget_; }

 private:
  double required_;
  double budget_;
};

/// Two projective points too close to define a contraction ratio.
class DegeneratePairError : public Error {
 public:
  using Error::Error;
};

/// Two independent computations of the same quantity disagree.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace glround
