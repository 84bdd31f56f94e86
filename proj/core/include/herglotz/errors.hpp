#pragma once

#include <stdexcept>
#include <string>

namespace herglotz {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad shapes, empty inputs, out-of-domain parameters.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// A user callback produced a non-finite value.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

// Linear-solve or step-control failure inside the integrator.
class NumericError : public Error {
 public:
  using Error::Error;
};

// The y-Hessian is singular or too ill-conditioned to solve for the
// fiber acceleration. `time()` is the simulation time of the failure
// (NaN when raised outside an integration).
class RegularityError : public NumericError {
 public:
  RegularityError(const std::string& what, double time);
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace herglotz
