#pragma once

#include <stdexcept>
#include <string>

namespace peaks {

// Base class for all failures raised by this library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Validation failures (bad parameters, malformed config). CLI maps these to exit 2.
class ValidationError : public Error {
public:
  using Error::Error;
};

class InvalidExponent : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class ConfigError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class OrderTooHigh : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class DegenerateWindow : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class GridTooLarge : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class GridMismatch : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class StepTooLarge : public ValidationError {
public:
  using ValidationError::ValidationError;
};

// Solver failures. CLI maps these to exit 3.
class SolverError : public Error {
public:
  using Error::Error;
};

class NonConvergence : public SolverError {
public:
  using SolverError::SolverError;
};

class NoConvergence : public SolverError {
public:
  using SolverError::SolverError;
};

class SingularGram : public SolverError {
public:
  using SolverError::SolverError;
};

class IterationBudgetExceeded : public SolverError {
public:
  using SolverError::SolverError;
};

class ContractionFailure : public SolverError {
public:
  using SolverError::SolverError;
};

class LinearSolveFailure : public SolverError {
public:
  using SolverError::SolverError;
};

class BarrierEscape : public SolverError {
public:
  using SolverError::SolverError;
};

}  // namespace peaks
