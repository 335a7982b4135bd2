#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace cavityqed {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates a documented precondition or type invariant.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The scattering response has no port coupling, so the Lorentzian is undefined.
class DegenerateResponseError : public Error {
 public:
  using Error::Error;
};

/// A detector sees no photon flux and g2 is undefined.
class UndefinedCorrelationError : public Error {
 public:
  using Error::Error;
};

/// A formula is evaluated outside of its range of validity.
class ValidityError : public Error {
 public:
  using Error::Error;
};

/// A truncated computation did not reach the requested tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A dispersive parameter needs a dressed state whose label is unreliable or absent.
class DispersiveInvalidError : public Error {
 public:
  explicit DispersiveInvalidError(std::string state, const std::string& what)
      : Error(what), state_(std::move(state)) {}

  const std::string& state() const noexcept { return state_; }

 private:
  std::string state_;
};

}  // namespace cavityqed
