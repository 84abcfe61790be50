#pragma once

#include <stdexcept>
#include <string>

namespace fracosc {

enum class ErrorCode {
  Domain = 1,        // argument outside an operation's domain
  GeneralizedOnly,   // alpha*gamma <= 1/2: only a generalized process exists
  Pole,              // evaluation at a pole of a special function
  Overflow,          // result not representable
  Regime,            // operation undefined in this regularity regime
  Quadrature,        // numerical integral failed to reach its tolerance
  Embedding,         // circulant embedding has negative eigenvalues
  Truncation,        // series truncation error exceeds budget
  InsufficientData,  // estimator has too few samples
  Divergence,        // expansion outside its convergence guard
  Range,             // index outside a valid range
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double achieved)
      : Error(ErrorCode::Quadrature, what), achieved_(achieved) {}
  /// Error estimate the integrator reached before giving up.
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace fracosc
