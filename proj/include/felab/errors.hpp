#pragma once

#include <stdexcept>
#include <string>

namespace felab {

// Exit-code mapping used by the CLI: DomainError -> 1, ConvergenceError -> 2.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

// q at or below a continuity threshold; carries the threshold value.
class ThresholdError : public DomainError {
public:
  ThresholdError(const std::string& msg, double threshold)
      : DomainError(msg), threshold_(threshold) {}
  double threshold() const { return threshold_; }

private:
  double threshold_;
};

class CapabilityError : public DomainError {
public:
  using DomainError::DomainError;
};

class ArityError : public DomainError {
public:
  using DomainError::DomainError;
};

class InvalidSetError : public DomainError {
public:
  using DomainError::DomainError;
};

class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& msg, double last_residual)
      : Error(msg), last_residual_(last_residual) {}
  double last_residual() const { return last_residual_; }

private:
  double last_residual_;
};

}  // namespace felab
