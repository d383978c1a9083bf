#pragma once

#include <stdexcept>
#include <string>

namespace critsense {

enum class ErrorKind {
  InvalidArgument,
  GaplessPhase,
  Truncation,
  NormDrift,
  StepTooLarge,
  Fit,
  Io,
  Verification,
};

/// Base of every error thrown by the library. `kind()` is what the C API
/// maps onto status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorKind::InvalidArgument, what) {}
};

/// g >= 1: the excitation gap is closed and the closed forms do not apply.
class GaplessPhase : public Error {
 public:
  explicit GaplessPhase(const std::string& what)
      : Error(ErrorKind::GaplessPhase, what) {}
};

/// Probability mass in the top tenth of the Fock basis exceeded tolerance.
class TruncationError : public Error {
 public:
  explicit TruncationError(const std::string& what)
      : Error(ErrorKind::Truncation, what) {}
};

class NormDrift : public Error {
 public:
  explicit NormDrift(const std::string& what)
      : Error(ErrorKind::NormDrift, what) {}
};

class StepTooLarge : public Error {
 public:
  explicit StepTooLarge(const std::string& what)
      : Error(ErrorKind::StepTooLarge, what) {}
};

class FitError : public Error {
 public:
  explicit FitError(const std::string& what) : Error(ErrorKind::Fit, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

class VerificationFailed : public Error {
 public:
  explicit VerificationFailed(const std::string& what)
      : Error(ErrorKind::Verification, what) {}
};

}  // namespace critsense
