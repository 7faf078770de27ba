#pragma once

#include <stdexcept>
#include <string>

namespace adaptctl {

// Base of everything the library throws. The CLI maps the subclasses onto
// exit codes (validation 2, infeasible 3, numerical 4).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: wrong dimensions, asymmetric matrices, parameters outside the
// admissible range.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A certificate or LMI search came back empty.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, double best_value)
      : Error(what), best_value_(best_value) {}

  double best_value() const { return best_value_; }

 private:
  double best_value_;
};

// Singular solves, divergence, disagreement between analytic and numeric
// routes.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// A bound was requested outside the region where it is valid.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

}  // namespace adaptctl
