#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace bergman {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed weight spec, CSV table or command-line value.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::string token)
      : Error(what + " (at '" + token + "')"), token_(std::move(token)) {}
  const std::string& token() const noexcept { return token_; }

 private:
  std::string token_;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Quadrature or series evaluation did not reach the requested tolerance.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double achieved_tol)
      : Error(what + " (achieved tol " + std::to_string(achieved_tol) + ")"),
        achieved_tol_(achieved_tol) {}
  double achieved_tol() const noexcept { return achieved_tol_; }

 private:
  double achieved_tol_;
};

/// The integral itself is infinite (panel contributions do not decay).
class DivergentIntegral : public NumericError {
 public:
  explicit DivergentIntegral(const std::string& what)
      : NumericError(what, std::numeric_limits<double>::infinity()) {}
};

/// A limit extrapolation saw a tail that is not Cauchy.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> tail)
      : Error(what), tail_(std::move(tail)) {}
  const std::vector<double>& tail() const noexcept { return tail_; }

 private:
  std::vector<double> tail_;
};

/// A series needs more coefficients than were precomputed.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, long required)
      : Error(what), required_(required) {}
  long required_terms() const noexcept { return required_; }

 private:
  long required_;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace bergman
