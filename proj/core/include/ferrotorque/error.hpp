#pragma once

#include <stdexcept>
#include <string>

namespace ferrotorque {

/// Bad user input: unknown keys, violated preconditions on configuration
/// values, malformed files. The CLI maps these to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical or physical failure during a computation (non-finite values,
/// instabilities, step-size violations). The CLI maps these to exit code 3.
class PhysicsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownMaterialError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NonFiniteError : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

class StepSizeError : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

class InstabilityError : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

class QuaternionDriftError : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

class NoCrossingError : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

class GeometryError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Parse failure in a text input, carrying the 1-based line number.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, int line)
      : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace ferrotorque
